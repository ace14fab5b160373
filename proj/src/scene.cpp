#include "isarff/scene.hpp"

#include <cmath>

namespace isarff {

void EncounterConfig::validate() const
{
  if (!(centre_frequency_hz > 0.0)) throw ConfigError("centre_frequency_hz must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be positive");
  if (!(bandwidth_hz < 2.0 * centre_frequency_hz))
    throw ConfigError("bandwidth_hz must be below twice centre_frequency_hz");
  if (frequency_samples < 2) throw ConfigError("frequency_samples must be at least 2");
  if (angle_samples_per_frame < 2) throw ConfigError("angle_samples_per_frame must be at least 2");
  if (!(integration_angle_deg > 0.0)) throw ConfigError("integration_angle_deg must be positive");
  if (!(total_aspect_span_deg >= integration_angle_deg))
    throw ConfigError("total_aspect_span_deg must be at least integration_angle_deg");
  if (!std::isfinite(grazing_start_deg) || !std::isfinite(grazing_end_deg))
    throw ConfigError("grazing angles must be finite");
}

BuiltinModel parse_builtin_model(std::string_view kind)
{
  if (kind == "box_with_panels") return BuiltinModel::box_with_panels;
  if (kind == "panel_with_hinges") return BuiltinModel::panel_with_hinges;
  if (kind == "single_point") return BuiltinModel::single_point;
  if (kind == "two_points") return BuiltinModel::two_points;
  throw ConfigError("unknown builtin model '" + std::string(kind) + "'");
}

namespace {

// Deterministic per-index reflectivity jitter in [0.7, 1.3].
double jitter(std::uint32_t i)
{
  std::uint32_t h = i * 2654435761u;
  h ^= h >> 15;
  h *= 2246822519u;
  h ^= h >> 13;
  return 0.7 + 0.6 * static_cast<double>(h & 0xffffu) / 65535.0;
}

struct Builder
{
  ScattererModel model;
  std::uint32_t counter{0};

  void add(const Eigen::Vector3d& p, double amplitude,
           std::optional<Eigen::Vector3d> normal = std::nullopt)
  {
    model.scatterers.push_back({p, amplitude * jitter(counter++), normal});
  }

  // Flat panel in the z = 0 plane; the face reflects from both sides.
  void panel(double x0, double x1, double y0, double y1, double step, double amplitude)
  {
    for (double x = x0; x <= x1 + 1e-9; x += step)
      for (double y = y0; y <= y1 + 1e-9; y += step) {
        add({x, y, 0.0}, amplitude, Eigen::Vector3d::UnitZ());
        add({x, y, 0.0}, amplitude, -Eigen::Vector3d::UnitZ());
      }
  }

  void edge_row(double x0, double x1, double y, double step, double amplitude)
  {
    for (double x = x0; x <= x1 + 1e-9; x += step) add({x, y, 0.0}, amplitude);
  }

  // Hinge across the panel width at x; protrudes on the side given by `side`.
  void hinge(double x, double y0, double y1, double step, double amplitude, double side)
  {
    for (double y = y0; y <= y1 + 1e-9; y += step)
      add({x, y, 0.01 * side}, amplitude, Eigen::Vector3d(0.0, 0.0, side));
  }

  void box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, double step, double amplitude)
  {
    for (double x = lo.x(); x <= hi.x() + 1e-9; x += step)
      for (double y = lo.y(); y <= hi.y() + 1e-9; y += step)
        for (double z = lo.z(); z <= hi.z() + 1e-9; z += step) {
          const bool surface = std::abs(x - lo.x()) < 1e-9 || std::abs(x - hi.x()) < 1e-9 ||
                               std::abs(y - lo.y()) < 1e-9 || std::abs(y - hi.y()) < 1e-9 ||
                               std::abs(z - lo.z()) < 1e-9 || std::abs(z - hi.z()) < 1e-9;
          if (surface) add({x, y, z}, amplitude);
        }
  }
};

constexpr double kPanelHalfWidth = 0.09;
constexpr double kPanelInner = 0.16;
constexpr double kPanelOuter = 0.46;
constexpr double kHingeAmplitude = 2.0;

void add_wing(Builder& b, double dir)
{
  const double x0 = dir > 0 ? kPanelInner : -kPanelOuter;
  const double x1 = dir > 0 ? kPanelOuter : -kPanelInner;
  b.panel(x0, x1, -kPanelHalfWidth, kPanelHalfWidth, 0.03, 0.6);
  b.edge_row(x0, x1, -kPanelHalfWidth, 0.015, 1.0);
  b.edge_row(x0, x1, kPanelHalfWidth, 0.015, 1.0);
  // Concertina hinges, alternating sides moving outboard.
  double side = 1.0;
  for (double offset : {0.235, 0.31, 0.385}) {
    b.hinge(dir * offset, -kPanelHalfWidth, kPanelHalfWidth, 0.015, kHingeAmplitude, side);
    side = -side;
  }
}

} // namespace

ScattererModel builtin_model(BuiltinModel kind)
{
  Builder b;
  switch (kind) {
  case BuiltinModel::single_point:
    return {"single_point", {{Eigen::Vector3d::Zero(), 1.0, std::nullopt}}};
  case BuiltinModel::two_points:
    return {"two_points",
            {{Eigen::Vector3d(0.5, 0.0, 0.0), 1.0, std::nullopt},
             {Eigen::Vector3d(-0.5, 0.0, 0.0), 1.0, std::nullopt}}};
  case BuiltinModel::panel_with_hinges:
    b.model.name = "panel_with_hinges";
    add_wing(b, 1.0);
    return b.model;
  case BuiltinModel::box_with_panels:
    b.model.name = "box_with_panels";
    b.box({-0.12, -0.15, -0.12}, {0.12, 0.15, 0.12}, 0.03, 1.0);
    // Panel attachment yokes.
    for (double x : {0.13, 0.145}) {
      b.add({x, 0.0, 0.0}, 1.0);
      b.add({-x, 0.0, 0.0}, 1.0);
    }
    add_wing(b, 1.0);
    add_wing(b, -1.0);
    return b.model;
  }
  throw ConfigError("unknown builtin model");
}

ScattererModel builtin_model(std::string_view kind)
{
  return builtin_model(parse_builtin_model(kind));
}

std::vector<FrameAperture> frame_apertures(const EncounterConfig& config)
{
  config.validate();
  const double omega = config.integration_angle_deg;
  // The epsilon absorbs representation error in exact multiples (19 / 0.95).
  const int n = static_cast<int>(std::floor(config.total_aspect_span_deg / omega + 1e-9));
  std::vector<FrameAperture> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    out.push_back({i, i * omega, (i + 1) * omega,
                   config.grazing_start_deg + t * (config.grazing_end_deg - config.grazing_start_deg)});
  }
  return out;
}

Eigen::Matrix3d imaging_rotation(const FrameAperture& aperture)
{
  const double a = deg2rad(aperture.aspect_centre_deg());
  const double g = deg2rad(aperture.grazing_deg);
  Eigen::Matrix3d aspect;
  aspect << std::cos(a), -std::sin(a), 0.0,
            std::sin(a),  std::cos(a), 0.0,
            0.0,          0.0,         1.0;
  Eigen::Matrix3d grazing;
  grazing << std::cos(g), 0.0, -std::sin(g),
             0.0,         1.0,  0.0,
             std::sin(g), 0.0,  std::cos(g);
  return grazing * aspect;
}

std::vector<ProjectedScatterer> project_scatterers(const ScattererModel& model,
                                                   const FrameAperture& aperture,
                                                   const VisibilityRule& rule)
{
  const Eigen::Matrix3d R = imaging_rotation(aperture);
  // Phase delay grows with +x, so the radar lies towards -x of the imaging frame.
  const Eigen::Vector3d towards_radar = R.transpose() * Eigen::Vector3d(-1.0, 0.0, 0.0);
  std::vector<ProjectedScatterer> out;
  out.reserve(model.scatterers.size());
  for (const auto& s : model.scatterers) {
    const Eigen::Vector3d p = R * s.position;
    double amplitude = s.amplitude;
    if (s.normal) {
      const double c = s.normal->normalized().dot(towards_radar);
      amplitude *= std::pow(std::max(0.0, c), rule.exponent);
    }
    out.push_back({p.x(), p.y(), amplitude});
  }
  return out;
}

} // namespace isarff
