#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isarff/align.hpp"
#include "isarff/cluster.hpp"
#include "isarff/edges.hpp"
#include "isarff/hough.hpp"
#include "isarff/isar_sim.hpp"
#include "isarff/persistence.hpp"
#include "isarff/scene.hpp"

namespace isarff {

/// Every tunable of a pipeline run. Keys in the flat config file match the
/// names returned by to_key_values().
struct PipelineConfig
{
  EncounterConfig encounter;
  std::string model{"builtin:box_with_panels"}; // builtin:<kind> or a CSV path

  // simulation
  Window window{Window::hanning};
  int zero_pad_factor{4};
  double dynamic_range_db{40.0};
  double visibility_exponent{1.0};

  // alignment and segmentation
  int min_area{12};
  bool enable_shear{false};
  Interp interp{Interp::bilinear};

  // edges and Hough
  double b{0.73};
  double sigma_dir_deg{10.0};
  int theta_bins{360};
  double min_fraction{0.3};
  int nhood_rho{5};
  int nhood_theta{5};
  double gap_tolerance{3.0};
  double min_length{8.0};

  // association
  int mu{4};
  std::optional<double> epsilon;
  KDistance k_distance{KDistance::mean_of_k};

  // persistence and shadow rules
  int persist_min_frames{3};
  int min_frames{10};
  double pv_min{0.95};
  double phi_min_deg{10.0};

  // outputs
  bool dump_gradients{false};
  std::string overlay_format{"png"};

  /// Applies key=value pairs on top of the defaults. Unknown keys and out-of-range
  /// values raise ConfigError naming the key.
  static PipelineConfig from_key_values(const std::vector<std::pair<std::string, std::string>>& kv);
  static PipelineConfig from_text(const std::string& text);

  void validate() const;

  /// Ordered snapshot of every parameter, each key exactly once.
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
  std::string to_text() const;

  EdgeOptions edge_options() const { return {b, min_area}; }
  HoughOptions hough_options(int threads) const { return {sigma_dir_deg, DirectionWeight::gaussian, threads}; }
  PeakOptions peak_options() const { return {min_fraction, nhood_rho, nhood_theta}; }
  LocalizeOptions localize_options() const { return {gap_tolerance, min_length, 1.0}; }
  ClusterOptions cluster_options() const { return {mu, epsilon, k_distance}; }
  ShadowRule shadow_rule() const { return {min_frames, pv_min, phi_min_deg}; }
  AlignOptions align_options(int threads) const;
};

} // namespace isarff
