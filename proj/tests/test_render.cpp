#include "doctest.h"

#include <set>

#include "isarff/io.hpp"
#include "isarff/render.hpp"
#include "tempdir.hpp"

using namespace isarff;

namespace {

IntensityFrame ramp(Eigen::Index rows, Eigen::Index cols)
{
  IntensityFrame f;
  f.pixels.resize(rows, cols);
  for (Eigen::Index i = 0; i < f.pixels.size(); ++i) f.pixels(i) = -40.0 + 40.0 * i / (f.pixels.size() - 1);
  return f;
}

bool is_gray(const std::array<std::uint8_t, 3>& c) { return c[0] == c[1] && c[1] == c[2]; }

} // namespace

TEST_CASE("an empty label map renders gray only")
{
  const auto img = render_overlay(ramp(16, 16), LabelMap::Zero(16, 16));
  for (Eigen::Index i = 0; i < img.indices.size(); ++i) {
    CHECK(img.indices(i) < kGrayLevels);
    CHECK(is_gray(img.palette[img.indices(i)]));
  }
  CHECK(img.indices(0) == 0);
  CHECK(img.indices(img.indices.size() - 1) == kGrayLevels - 1);
}

TEST_CASE("one cluster renders in exactly one colour at its pixels")
{
  LabelMap l = LabelMap::Zero(8, 8);
  l.row(3).setConstant(5);
  const auto img = render_overlay(ramp(8, 8), l);
  std::set<int> overlay;
  for (Eigen::Index r = 0; r < 8; ++r)
    for (Eigen::Index c = 0; c < 8; ++c) {
      if (l(r, c)) overlay.insert(img.indices(r, c));
      else CHECK(img.indices(r, c) < kGrayLevels);
    }
  REQUIRE(overlay.size() == 1);
  CHECK(*overlay.begin() == overlay_index(5));
  CHECK(img.palette[overlay_index(5)] == cluster_colour(5));
  CHECK_FALSE(is_gray(cluster_colour(5)));
}

TEST_CASE("cluster colours are distinct across the overlay slots")
{
  std::set<std::array<std::uint8_t, 3>> seen;
  for (int id = 1; id <= 256 - kGrayLevels; ++id) seen.insert(cluster_colour(id));
  CHECK(seen.size() == static_cast<std::size_t>(256 - kGrayLevels));
  CHECK(overlay_index(1) == kGrayLevels);
  CHECK(overlay_index(1 + 256 - kGrayLevels) == kGrayLevels);
}

TEST_CASE("a track map lights exactly its rasterised pixels")
{
  LabelMap l = LabelMap::Zero(32, 32);
  const Segment s{-6, 6, line_point(3, 30, -6), line_point(3, 30, 6)};
  rasterize_segment(l, s, 2);
  const auto img = render_overlay(ramp(32, 32), l);
  int lit = 0;
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    CHECK((img.indices(i) >= kGrayLevels) == (l(i) != 0));
    lit += l(i) != 0;
  }
  CHECK(lit >= 12);
}

TEST_CASE("shape mismatch is rejected")
{
  CHECK_THROWS_AS(render_overlay(ramp(8, 8), LabelMap::Zero(8, 9)), ShapeMismatchError);
}

TEST_CASE("overlay files")
{
  testing::TempDir dir;
  LabelMap l = LabelMap::Zero(6, 10);
  l(2, 4) = 1;
  const auto img = render_overlay(ramp(6, 10), l);

  write_overlay(dir / "o.png", img, ImageFormat::png);
  const std::string png = io::read_text(dir / "o.png");
  REQUIRE(png.size() > 33);
  CHECK(png.substr(0, 8) == std::string("\x89PNG\r\n\x1a\n", 8));
  CHECK(png.substr(12, 4) == "IHDR");
  CHECK(static_cast<unsigned char>(png[19]) == 10); // width
  CHECK(static_cast<unsigned char>(png[23]) == 6);  // height
  CHECK(png[25] == 3);                              // palette colour type

  write_overlay(dir / "o.pgm", img, ImageFormat::pgm);
  const std::string pgm = io::read_text(dir / "o.pgm");
  const std::string head = "P5\n10 6\n255\n";
  REQUIRE(pgm.size() == head.size() + 60);
  CHECK(pgm.substr(0, head.size()) == head);
  for (std::size_t i = 0; i < 60; ++i) {
    const auto v = static_cast<unsigned char>(pgm[head.size() + i]);
    CHECK((v == 255) == (i == 2 * 10 + 4));
  }
}
