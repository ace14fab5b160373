#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "isarff/align.hpp"
#include "isarff/cluster.hpp"
#include "isarff/hough.hpp"
#include "isarff/isar_sim.hpp"
#include "isarff/persistence.hpp"
#include "isarff/scene.hpp"

namespace isarff::io {

namespace fs = std::filesystem;

// Binary rasters: 6-byte magic, u32 LE rows, cols, row-major payload, then float32
// range_spacing, crossrange_spacing and u32 frame_index.
inline constexpr char kComplexMagic[] = "ISARC1";
inline constexpr char kIntensityMagic[] = "ISARI1";
inline constexpr char kGradMagnitudeMagic[] = "GRADM1";
inline constexpr char kGradDirectionMagic[] = "GRADD1";
inline constexpr char kMaskMagic[] = "MASKB1";
inline constexpr char kFeatureMapMagic[] = "FMAP01";

struct RasterMeta
{
  double range_spacing{0.0};
  double crossrange_spacing{0.0};
  int frame_index{0};
};

void write_complex_frame(const fs::path& path, const ComplexFrame& frame);
ComplexFrame read_complex_frame(const fs::path& path);

void write_real_raster(const fs::path& path, const char* magic, const ImageD& pixels, const RasterMeta& meta);
ImageD read_real_raster(const fs::path& path, const char* magic, RasterMeta* meta = nullptr);

void write_intensity_frame(const fs::path& path, const IntensityFrame& frame);
IntensityFrame read_intensity_frame(const fs::path& path);

void write_mask(const fs::path& path, const Mask& mask, const RasterMeta& meta);
Mask read_mask(const fs::path& path, RasterMeta* meta = nullptr);

/// u16 label grid; header is magic plus rows and cols only.
void write_feature_map(const fs::path& path, const LabelMap& map);
LabelMap read_feature_map(const fs::path& path);

// Scatterer model CSV: x_m,y_m,z_m,amplitude,nx,ny,nz (normals blank for isotropic).
void write_model_csv(const fs::path& path, const ScattererModel& model);
ScattererModel read_model_csv(const fs::path& path);

/// Flat key=value text: one key per line, '#' starts a comment, duplicate keys rejected.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);
std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

/// Encounter file: exactly the eight encounter keys.
EncounterConfig parse_encounter(const std::string& text);
std::string format_encounter(const EncounterConfig& config);

std::string format_double(double v);

// CSV reports.
std::string alignment_csv(const AlignedSequence& seq);
std::string feature_csv(const std::vector<LineFeature>& features);
std::vector<LineFeature> parse_feature_csv(const std::string& text);

struct ClusterRow
{
  int cluster_id;
  int frame;
  double rho_px;
  double theta_deg;
  double strength;
  bool is_noise;
};

std::string cluster_csv(const std::vector<FeatureCluster>& clusters, const std::vector<LineFeature>& features);
std::vector<ClusterRow> parse_cluster_csv(const std::string& text);

struct KinematicsRow
{
  int cluster_id;
  ClusterKinematics kinematics;
  Label label;
};

std::string kinematics_csv(const std::vector<KinematicsRow>& rows);

} // namespace isarff::io
