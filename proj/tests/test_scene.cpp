#include "doctest.h"

#include <random>
#include <set>

#include "isarff/scene.hpp"

using namespace isarff;

TEST_CASE("single_point is one unit scatterer at the origin")
{
  const auto m = builtin_model("single_point");
  REQUIRE(m.scatterers.size() == 1);
  CHECK(m.scatterers[0].position.isZero(0.0));
  CHECK(m.scatterers[0].amplitude == 1.0);
  CHECK_FALSE(m.scatterers[0].normal.has_value());
}

TEST_CASE("two_points is a symmetric unit pair on the x axis")
{
  const auto m = builtin_model(BuiltinModel::two_points);
  REQUIRE(m.scatterers.size() == 2);
  CHECK(m.scatterers[0].position == Eigen::Vector3d(0.5, 0, 0));
  CHECK(m.scatterers[1].position == Eigen::Vector3d(-0.5, 0, 0));
  CHECK(m.scatterers[0].amplitude == 1.0);
  CHECK(m.scatterers[1].amplitude == 1.0);
}

TEST_CASE("unknown builtin kinds are configuration errors")
{
  CHECK_THROWS_AS(builtin_model("dodecahedron"), ConfigError);
  CHECK_THROWS_AS(parse_builtin_model(""), ConfigError);
}

TEST_CASE("box_with_panels geometry audit")
{
  const auto m = builtin_model("box_with_panels");
  CHECK(m.scatterers.size() >= 200);
  for (const auto& s : m.scatterers) {
    CHECK(s.amplitude >= 0.0);
    CHECK(s.position.allFinite());
  }

  // Hinge scatterers stand off the panel plane. Collect (panel side, x offset, protrusion side).
  std::set<std::tuple<int, int, int>> hinges;
  for (const auto& s : m.scatterers) {
    if (std::abs(s.position.z()) < 1e-12 || std::abs(s.position.x()) < 0.16 || !s.normal) continue;
    const int wing = s.position.x() > 0 ? 1 : -1;
    const int offset_mm = static_cast<int>(std::lround(std::abs(s.position.x()) * 1000));
    const int side = s.position.z() > 0 ? 1 : -1;
    CHECK(s.normal->z() == doctest::Approx(side));
    hinges.insert({wing, offset_mm, side});
  }
  // Three hinge rows per wing, alternating sides moving outboard, on both wings.
  for (int wing : {-1, 1}) {
    std::vector<int> sides;
    for (const auto& [w, offset, side] : hinges)
      if (w == wing) sides.push_back(side);
    REQUIRE(sides.size() == 3);
    CHECK(sides[0] == -sides[1]);
    CHECK(sides[1] == -sides[2]);
  }
  // Both faces are present among the hinge rows.
  std::set<int> faces;
  for (const auto& h : hinges) faces.insert(std::get<2>(h));
  CHECK(faces.size() == 2);

  // Deterministic.
  const auto again = builtin_model("box_with_panels");
  REQUIRE(again.scatterers.size() == m.scatterers.size());
  for (std::size_t i = 0; i < m.scatterers.size(); ++i) {
    CHECK(again.scatterers[i].position == m.scatterers[i].position);
    CHECK(again.scatterers[i].amplitude == m.scatterers[i].amplitude);
  }
}

TEST_CASE("frame count follows the floor of span over integration angle")
{
  EncounterConfig c;
  c.total_aspect_span_deg = 120.0;
  c.integration_angle_deg = 0.95;
  CHECK(frame_apertures(c).size() == 126);

  c.total_aspect_span_deg = 0.95;
  CHECK(frame_apertures(c).size() == 1);

  c.total_aspect_span_deg = 10.0;
  c.integration_angle_deg = 1.0;
  const auto a = frame_apertures(c);
  REQUIRE(a.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(a[i].index == i);
    CHECK(a[i].aspect_start_deg == doctest::Approx(i));
  }

  c.total_aspect_span_deg = 10.5;
  CHECK(frame_apertures(c).size() == 10);
  CHECK(EncounterConfig{}.total_aspect_span_deg / EncounterConfig{}.integration_angle_deg == doctest::Approx(20));
  CHECK(frame_apertures(EncounterConfig{}).size() == 20);
}

TEST_CASE("apertures tile the span contiguously with a linear grazing sweep")
{
  EncounterConfig c;
  c.total_aspect_span_deg = 37.3;
  c.integration_angle_deg = 1.7;
  c.grazing_start_deg = -6.0;
  c.grazing_end_deg = 9.0;
  const auto a = frame_apertures(c);
  const std::size_t n = a.size();
  REQUIRE(n == 21);
  CHECK(a.front().aspect_start_deg == 0.0);
  CHECK(a.back().aspect_stop_deg == doctest::Approx(n * 1.7));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(a[i].aspect_stop_deg - a[i].aspect_start_deg == doctest::Approx(1.7));
    if (i > 0) CHECK(a[i].aspect_start_deg == doctest::Approx(a[i - 1].aspect_stop_deg));
    CHECK(a[i].grazing_deg == doctest::Approx(-6.0 + 15.0 * static_cast<double>(i) / (n - 1)));
  }
}

TEST_CASE("default sweep passes through zero grazing mid-sequence")
{
  const auto a = frame_apertures(EncounterConfig{});
  CHECK(a.front().grazing_deg == -10.0);
  CHECK(a.back().grazing_deg == 10.0);
  CHECK(a[9].grazing_deg < 0.0);
  CHECK(a[10].grazing_deg > 0.0);
}

TEST_CASE("encounter validation")
{
  EncounterConfig c;
  c.bandwidth_hz = 700e9;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.integration_angle_deg = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.total_aspect_span_deg = 0.5;
  CHECK_THROWS_AS(frame_apertures(c), ConfigError);
}

TEST_CASE("projection of simple targets")
{
  FrameAperture ap{0, 10.0, 11.0, 4.0};
  const auto p = project_scatterers(builtin_model("single_point"), ap);
  REQUIRE(p.size() == 1);
  CHECK(p[0].x == 0.0);
  CHECK(p[0].y == 0.0);
  CHECK(p[0].amplitude == 1.0);

  // Quarter turn in aspect moves the +x point onto the cross-range axis.
  ScattererModel unit{"unit", {{Eigen::Vector3d(1, 0, 0), 1.0, std::nullopt}}};
  const auto q = project_scatterers(unit, FrameAperture{0, 89.5, 90.5, 0.0});
  CHECK(q[0].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(q[0].y) == doctest::Approx(1.0));
  CHECK(q[0].y == doctest::Approx(1.0));
  CHECK(q[0].amplitude == 1.0);
}

TEST_CASE("imaging rotation is orthonormal and preserves distances")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const FrameAperture ap{0, 90 * u(rng), 0, 30 * u(rng)};
    const Eigen::Matrix3d R = imaging_rotation(ap);
    CHECK((R.transpose() * R - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(R.determinant() == doctest::Approx(1.0));
    const Eigen::Vector3d a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng));
    CHECK((R * a - R * b).norm() == doctest::Approx((a - b).norm()).epsilon(1e-12));
  }
}

TEST_CASE("projection commutes with amplitude scaling")
{
  const auto m = builtin_model("box_with_panels");
  auto scaled = m;
  for (auto& s : scaled.scatterers) s.amplitude *= 3.5;
  const FrameAperture ap{3, 3.0, 3.95, -2.0};
  const auto a = project_scatterers(m, ap);
  const auto b = project_scatterers(scaled, ap);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i].x == a[i].x);
    CHECK(b[i].y == a[i].y);
    CHECK(b[i].amplitude == doctest::Approx(3.5 * a[i].amplitude));
  }
}

TEST_CASE("panel faces nearly vanish when the line of sight grazes the panel plane")
{
  const auto m = builtin_model("box_with_panels");
  const auto p = project_scatterers(m, FrameAperture{0, 9.5, 10.45, 0.5});
  const double visibility_threshold = 0.01;
  int faces = 0;
  for (std::size_t i = 0; i < m.scatterers.size(); ++i) {
    const auto& s = m.scatterers[i];
    if (!s.normal) {
      CHECK(p[i].amplitude == s.amplitude);
      continue;
    }
    ++faces;
    // sin(0.5 deg) is about 0.0087.
    CHECK(p[i].amplitude <= visibility_threshold * s.amplitude);
  }
  CHECK(faces > 0);
}

TEST_CASE("visibility follows the grazing side and the exponent")
{
  ScattererModel up{"up", {{Eigen::Vector3d::Zero(), 1.0, Eigen::Vector3d::UnitZ()}}};
  ScattererModel down{"down", {{Eigen::Vector3d::Zero(), 1.0, -Eigen::Vector3d::UnitZ()}}};
  const FrameAperture ap{0, 0.0, 0.0, 30.0};
  const double s30 = std::sin(deg2rad(30.0));
  CHECK(project_scatterers(up, ap)[0].amplitude == doctest::Approx(s30));
  CHECK(project_scatterers(down, ap)[0].amplitude == 0.0);
  CHECK(project_scatterers(up, ap, VisibilityRule{2.0})[0].amplitude == doctest::Approx(s30 * s30));
  const FrameAperture below{0, 0.0, 0.0, -30.0};
  CHECK(project_scatterers(up, below)[0].amplitude == 0.0);
  CHECK(project_scatterers(down, below)[0].amplitude == doctest::Approx(s30));
}
