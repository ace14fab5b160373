#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isarff/types.hpp"

namespace isarff {

struct Scatterer
{
  Eigen::Vector3d position{Eigen::Vector3d::Zero()}; // metres, target body frame
  double amplitude{1.0};
  std::optional<Eigen::Vector3d> normal;             // unset = isotropic
};

struct ScattererModel
{
  std::string name;
  std::vector<Scatterer> scatterers;
};

/// Parameters of one observation encounter.
struct EncounterConfig
{
  double centre_frequency_hz{300e9};
  double bandwidth_hz{5e9};
  int frequency_samples{64};
  int angle_samples_per_frame{64};
  double total_aspect_span_deg{19.0};
  double integration_angle_deg{0.95};
  double grazing_start_deg{-10.0};
  double grazing_end_deg{10.0};

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct FrameAperture
{
  int index{0};
  double aspect_start_deg{0.0};
  double aspect_stop_deg{0.0};
  double grazing_deg{0.0};

  double aspect_centre_deg() const { return 0.5 * (aspect_start_deg + aspect_stop_deg); }
};

/// A scatterer rotated into the slant plane of an aperture centre.
struct ProjectedScatterer
{
  double x; // range, metres
  double y; // cross-range, metres
  double amplitude;
};

enum class BuiltinModel { box_with_panels, panel_with_hinges, single_point, two_points };

BuiltinModel parse_builtin_model(std::string_view kind);
ScattererModel builtin_model(BuiltinModel kind);
ScattererModel builtin_model(std::string_view kind);

std::vector<FrameAperture> frame_apertures(const EncounterConfig& config);

/// Rotation taking body coordinates into the imaging frame (x range, y cross-range,
/// z out of the slant plane). The radar lies towards -x of the imaging frame.
Eigen::Matrix3d imaging_rotation(const FrameAperture& aperture);

struct VisibilityRule
{
  double exponent{1.0};
};

std::vector<ProjectedScatterer> project_scatterers(const ScattererModel& model,
                                                   const FrameAperture& aperture,
                                                   const VisibilityRule& rule = {});

} // namespace isarff
