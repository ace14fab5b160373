#include "doctest.h"

#include "isarff/align.hpp"
#include "isarff/imgproc.hpp"
#include "isarff/scene.hpp"

using namespace isarff;

namespace {

IntensityFrame floor_frame(Eigen::Index rows, Eigen::Index cols, double floor_db = -40.0)
{
  IntensityFrame f;
  f.pixels = ImageD::Constant(rows, cols, floor_db);
  f.range_spacing = f.crossrange_spacing = 0.0075;
  return f;
}

// Rectangle of bright pixels with a gentle intensity ramp, rotated by `deg` about the
// centre and shifted by (sx, sy), rendered by point sampling.
IntensityFrame bar_frame(Eigen::Index n, double half_len, double half_wid, double deg, double sx = 0, double sy = 0)
{
  IntensityFrame f = floor_frame(n, n);
  const auto frame = PixelFrame::of(n, n);
  const double t = deg2rad(deg);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const Eigen::Vector2d p = frame.to_centred(static_cast<double>(c), static_cast<double>(r)) - Eigen::Vector2d(sx, sy);
      const double u = p.x() * std::cos(t) + p.y() * std::sin(t);
      const double v = -p.x() * std::sin(t) + p.y() * std::cos(t);
      if (std::abs(u) <= half_len && std::abs(v) <= half_wid) f.pixels(r, c) = -3.0 - 0.05 * std::abs(u);
    }
  return f;
}

Mask bar_mask(Eigen::Index n, double half_len, double half_wid, double deg)
{
  const IntensityFrame f = bar_frame(n, half_len, half_wid, deg);
  return (f.pixels > -40.0).cast<std::uint8_t>();
}

} // namespace

TEST_CASE("identity params compose to the identity")
{
  const Affine2 t = compose_affine({});
  CHECK(t.A == Eigen::Matrix2d::Identity());
  CHECK(t.S == Eigen::Vector2d::Zero());
}

TEST_CASE("quarter-turn rotation is exact")
{
  AffineParams p;
  p.theta = kPi / 2;
  Eigen::Matrix2d expected;
  expected << 0, -1, 1, 0;
  CHECK(compose_affine(p).A == expected);
}

TEST_CASE("composition order is scale, shear, rotation")
{
  AffineParams p;
  p.cx = 2.0;
  p.cy = 1.0;
  p.dx = 0.5;
  p.dy = 0.0;
  p.theta = deg2rad(30.0);
  // Independent product: hand-multiplied entries of diag(2,1) [[1,.5],[0,1]] R(30).
  const double c = std::sqrt(3.0) / 2.0, s = 0.5;
  Eigen::Matrix2d expected;
  expected << 2.0 * (c + 0.5 * s), 2.0 * (-s + 0.5 * c), s, c;
  CHECK((compose_affine(p).A - expected).norm() < 1e-14);

  AffineParams rot;
  rot.theta = 0.3;
  AffineParams sc;
  sc.cx = 1.5;
  sc.cy = 0.7;
  const Eigen::Matrix2d R = compose_affine(rot).A, S = compose_affine(sc).A;
  AffineParams both = rot;
  both.cx = 1.5;
  both.cy = 0.7;
  CHECK((compose_affine(both).A - S * R).norm() < 1e-14);
}

TEST_CASE("singular parameters are rejected")
{
  AffineParams p;
  p.cx = 0.0;
  CHECK_THROWS_AS(compose_affine(p), DegenerateTransformError);
  AffineParams q;
  q.dx = 1.0;
  q.dy = 1.0;
  CHECK_THROWS_AS(compose_affine(q), DegenerateTransformError);
}

TEST_CASE("identity warp is bit-exact for both interpolations")
{
  IntensityFrame f = floor_frame(9, 11);
  for (Eigen::Index i = 0; i < f.pixels.size(); ++i) f.pixels(i) = -0.37 * static_cast<double>(i % 17) - 1e-3 * i;
  for (Interp m : {Interp::nearest, Interp::bilinear}) CHECK((apply_affine(f, {}, m, -40.0).pixels == f.pixels).all());
}

TEST_CASE("integer translation shifts columns and fills entering pixels")
{
  IntensityFrame f = floor_frame(6, 10);
  for (Eigen::Index i = 0; i < f.pixels.size(); ++i) f.pixels(i) = -static_cast<double>(i);
  AffineParams p;
  p.sx = 5.0;
  const auto out = apply_affine(f, p, Interp::nearest, -99.0);
  for (Eigen::Index r = 0; r < 6; ++r)
    for (Eigen::Index c = 0; c < 10; ++c) CHECK(out.pixels(r, c) == (c < 5 ? -99.0 : f.pixels(r, c - 5)));
}

TEST_CASE("quarter-turn of an L shape permutes indices exactly")
{
  const Eigen::Index n = 7;
  IntensityFrame f = floor_frame(n, n);
  f.pixels.col(1).segment(1, 5) = -1.0;
  f.pixels.row(5).segment(1, 4) = -2.0;
  f.pixels(1, 1) = -3.0;
  AffineParams p;
  p.theta = kPi / 2;
  const auto out = apply_affine(f, p, Interp::nearest, -40.0);
  // Forward map (x, y) -> (-y, x) in centre coordinates: src(r, c) lands at (c, n-1-r).
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) CHECK(out.pixels(c, n - 1 - r) == f.pixels(r, c));
}

TEST_CASE("segmentation of simple scenes")
{
  CHECK_THROWS_AS(segment_target(floor_frame(16, 16)), SegmentationError);

  IntensityFrame blob = floor_frame(32, 32);
  blob.pixels.block(10, 12, 6, 5) = -2.0;
  const Mask m = segment_target(blob);
  CHECK(m.cast<int>().sum() == 30);
  CHECK(m.block(10, 12, 6, 5).cast<int>().sum() == 30);

  IntensityFrame two = floor_frame(32, 32);
  two.pixels.block(4, 4, 6, 6) = -2.0;
  two.pixels.block(24, 24, 2, 2) = -2.0;
  const Mask k = segment_target(two, {12});
  CHECK(k.block(4, 4, 6, 6).cast<int>().sum() == 36);
  CHECK(k.block(24, 24, 2, 2).cast<int>().sum() == 0);
  CHECK(k.cast<int>().sum() == 36);
}

TEST_CASE("attitude axis from second moments")
{
  Mask bar = Mask::Zero(21, 41);
  bar.block(9, 5, 3, 31).setOnes();
  CHECK(estimate_attitude_axis(bar) == doctest::Approx(0.0));

  const Mask tilted = bar_mask(81, 30, 3, 30.0);
  CHECK(rad2deg(estimate_attitude_axis(tilted)) == doctest::Approx(30.0).epsilon(1.0 / 30.0));

  const Mask vertical = bar_mask(41, 15.5, 2.5, 90.0);
  CHECK(rad2deg(estimate_attitude_axis(vertical)) == doctest::Approx(90.0));

  Mask square = Mask::Zero(10, 10);
  square.block(2, 2, 6, 6).setOnes();
  CHECK_THROWS_AS(estimate_attitude_axis(square), AmbiguousAxisError);
}

TEST_CASE("identical frames align to the identity")
{
  const IntensityFrame f = bar_frame(64, 20, 5, 12.0);
  std::vector<IntensityFrame> seq(4, f);
  for (int i = 0; i < 4; ++i) seq[i].frame_index = i;
  const auto out = align_sequence(seq);
  for (const auto& p : out.params) {
    CHECK(std::abs(rad2deg(p.theta)) < 0.5);
    CHECK(std::abs(p.sx) < 0.5);
    CHECK(std::abs(p.sy) < 0.5);
    CHECK(p.cx == doctest::Approx(1.0));
    CHECK(p.cy == doctest::Approx(1.0));
  }
  CHECK((out.frames[out.reference_index].pixels == f.pixels).all());
}

TEST_CASE("known rotations and translations are recovered")
{
  const Eigen::Index n = 96;
  const IntensityFrame ref = bar_frame(n, 30, 6, 0.0);
  struct Case
  {
    double deg, sx, sy;
  };
  for (const Case k : {Case{20.0, 4.0, -3.0}, Case{-35.0, -6.0, 2.0}, Case{8.0, 0.0, 7.0}}) {
    IntensityFrame moved = bar_frame(n, 30, 6, k.deg, k.sx, k.sy);
    moved.frame_index = 1;
    AlignOptions opt;
    opt.reference_index = 0;
    const auto out = align_sequence({ref, moved}, opt);
    const AffineParams& p = out.params[1];
    CHECK(out.status[1] == FrameStatus::ok);
    CHECK(rad2deg(p.theta) == doctest::Approx(-k.deg).epsilon(1.0 / std::abs(k.deg)));
    // Inverse of "rotate by R then shift by s" is p -> R^T p - R^T s.
    const double t = deg2rad(k.deg);
    const Eigen::Vector2d inv_shift(-(std::cos(t) * k.sx + std::sin(t) * k.sy), -(-std::sin(t) * k.sx + std::cos(t) * k.sy));
    CHECK(std::abs(p.sx - inv_shift.x()) < 1.0);
    CHECK(std::abs(p.sy - inv_shift.y()) < 1.0);
    CHECK(std::abs(p.cx - 1.0) < 0.05);
    CHECK(std::abs(p.cy - 1.0) < 0.05);
  }
}

TEST_CASE("aligning an aligned sequence is close to the identity")
{
  const Eigen::Index n = 96;
  std::vector<IntensityFrame> seq;
  for (int i = 0; i < 5; ++i) {
    seq.push_back(bar_frame(n, 34 - i, 12, 4.0 * i - 8.0, 0.7 * i, -0.5 * i));
    seq.back().frame_index = i;
  }
  const auto once = align_sequence(seq);
  const auto twice = align_sequence(once.frames);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const AffineParams& p = twice.params[i];
    CHECK(std::abs(rad2deg(p.theta)) < 0.5);
    CHECK(std::abs(p.sx) < 0.5);
    CHECK(std::abs(p.sy) < 0.5);
    CHECK(std::abs(p.cx - 1.0) < 0.01);
    CHECK(std::abs(p.cy - 1.0) < 0.01);
  }
}

TEST_CASE("a frame that cannot be segmented is flagged, the reference is fatal")
{
  const IntensityFrame good = bar_frame(48, 15, 4, 0.0);
  const IntensityFrame empty = floor_frame(48, 48);
  const auto out = align_sequence({good, empty, good});
  CHECK(out.status[1] == FrameStatus::unaligned);
  CHECK(out.status[0] == FrameStatus::ok);
  AlignOptions opt;
  opt.reference_index = 1;
  CHECK_THROWS_AS(align_sequence({good, empty}, opt), SegmentationError);
  CHECK_THROWS_AS(align_sequence({good}), InsufficientDataError);
  opt.reference_index.reset();
  opt.enable_shear = true;
  CHECK_THROWS_AS(align_sequence({good, good}, opt), ConfigError);
}

TEST_CASE("alignment preserves frame dimensions")
{
  std::vector<IntensityFrame> seq{bar_frame(40, 12, 3, 5.0), bar_frame(40, 12, 3, -5.0, 2, 1)};
  const auto out = align_sequence(seq);
  for (const auto& f : out.frames) {
    CHECK(f.pixels.rows() == 40);
    CHECK(f.pixels.cols() == 40);
  }
}
