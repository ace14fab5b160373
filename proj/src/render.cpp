#include "isarff/render.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

namespace isarff {

namespace {

constexpr int kOverlaySlots = 256 - kGrayLevels;

std::uint8_t gray_of(int level) { return static_cast<std::uint8_t>((level * 255) / (kGrayLevels - 1)); }

} // namespace

std::array<std::uint8_t, 3> cluster_colour(int cluster_id)
{
  // golden-angle hue walk, fully saturated
  const double hue = std::fmod((cluster_id - 1) * 137.50776405003785, 360.0) / 60.0;
  const int sector = static_cast<int>(hue) % 6;
  const double f = hue - std::floor(hue);
  const double rise = f, fall = 1.0 - f;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = 1; g = rise; break;
    case 1: r = fall; g = 1; break;
    case 2: g = 1; b = rise; break;
    case 3: g = fall; b = 1; break;
    case 4: r = rise; b = 1; break;
    default: r = 1; b = fall; break;
  }
  auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(40.0 + 215.0 * v)); };
  return {q(r), q(g), q(b)};
}

int overlay_index(int cluster_id) { return kGrayLevels + (cluster_id - 1) % kOverlaySlots; }

IndexedImage render_overlay(const IntensityFrame& base, const LabelMap& labels)
{
  if (base.pixels.rows() != labels.rows() || base.pixels.cols() != labels.cols())
    throw ShapeMismatchError("overlay label grid does not match the base frame");
  IndexedImage out;
  for (int i = 0; i < kGrayLevels; ++i) {
    const std::uint8_t g = gray_of(i);
    out.palette[i] = {g, g, g};
  }
  for (int id = 1; id <= kOverlaySlots; ++id) out.palette[overlay_index(id)] = cluster_colour(id);

  const double lo = base.pixels.size() ? base.pixels.minCoeff() : 0.0;
  const double hi = base.pixels.size() ? base.pixels.maxCoeff() : 0.0;
  const double span = hi - lo;
  out.indices.resize(base.pixels.rows(), base.pixels.cols());
  for (Eigen::Index r = 0; r < base.pixels.rows(); ++r)
    for (Eigen::Index c = 0; c < base.pixels.cols(); ++c) {
      if (labels(r, c) != 0) {
        out.indices(r, c) = static_cast<std::uint8_t>(overlay_index(labels(r, c)));
        continue;
      }
      const double u = span > 0.0 ? (base.pixels(r, c) - lo) / span : 0.0;
      out.indices(r, c) = static_cast<std::uint8_t>(std::min(kGrayLevels - 1, static_cast<int>(u * kGrayLevels)));
    }
  return out;
}

namespace {

void write_png(const std::filesystem::path& path, const IndexedImage& image)
{
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  const auto rows = static_cast<png_uint_32>(image.indices.rows());
  const auto cols = static_cast<png_uint_32>(image.indices.cols());
  png_set_IHDR(png, info, cols, rows, 8, PNG_COLOR_TYPE_PALETTE, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  std::array<png_color, 256> colours{};
  for (int i = 0; i < 256; ++i) colours[i] = {image.palette[i][0], image.palette[i][1], image.palette[i][2]};
  png_set_PLTE(png, info, colours.data(), 256);
  png_write_info(png, info);
  Image<std::uint8_t> copy = image.indices;
  for (png_uint_32 r = 0; r < rows; ++r) png_write_row(png, copy.row(r).data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_pgm(const std::filesystem::path& path, const IndexedImage& image)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "P5\n" << image.indices.cols() << ' ' << image.indices.rows() << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(image.indices.cols()));
  for (Eigen::Index r = 0; r < image.indices.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.indices.cols(); ++c) {
      const int idx = image.indices(r, c);
      row[c] = static_cast<char>(idx >= kGrayLevels ? 255 : std::min<int>(254, image.palette[idx][0]));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw Error("failed writing " + path.string());
}

} // namespace

void write_overlay(const std::filesystem::path& path, const IndexedImage& image, ImageFormat format)
{
  if (format == ImageFormat::png) write_png(path, image);
  else write_pgm(path, image);
}

} // namespace isarff
