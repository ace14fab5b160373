#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "isarff/cluster.hpp"
#include "isarff/isar_sim.hpp"

namespace isarff {

/// Palette index image plus its colour table. Indices below kGrayLevels are gray
/// ramps of the base image; cluster labels take the entries above.
struct IndexedImage
{
  Image<std::uint8_t> indices;
  std::array<std::array<std::uint8_t, 3>, 256> palette{};
};

inline constexpr int kGrayLevels = 224;

/// Deterministic colour of a cluster id (ids wrap onto the 32 overlay slots).
std::array<std::uint8_t, 3> cluster_colour(int cluster_id);
int overlay_index(int cluster_id);

/// Grayscale rendering of the dB frame with every labelled pixel replaced by its
/// cluster's palette entry.
IndexedImage render_overlay(const IntensityFrame& base, const LabelMap& labels);

enum class ImageFormat { png, pgm };

/// PNG keeps the palette; PGM P5 writes gray levels with overlay pixels at 255.
void write_overlay(const std::filesystem::path& path, const IndexedImage& image, ImageFormat format);

} // namespace isarff
