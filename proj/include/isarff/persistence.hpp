#pragma once

#include <vector>

#include "isarff/cluster.hpp"
#include "isarff/isar_sim.hpp"

namespace isarff {

enum class Cumulative { mean, median };

IntensityFrame cumulative_image(const std::vector<IntensityFrame>& frames, Cumulative method);

struct ClusterKinematics
{
  Eigen::Vector3d principal_direction{Eigen::Vector3d::UnitZ()}; // (rho, theta, frame) scaled space
  double variance_fraction{1.0}; // P_V
  double divergence_deg{0.0};    // angle to the frame axis, [0, 90]
  int frame_count{0};
};

/// PCA of the members in (rho_scaled, theta_scaled, frame * frame_scale).
ClusterKinematics cluster_pca(const FeatureCluster& cluster, double frame_scale);

/// Frames mapped onto [0, 1] across the sequence.
inline double frame_scale_for(int frame_total) { return frame_total > 1 ? 1.0 / (frame_total - 1) : 1.0; }

enum class Label { static_feature, shadow_edge, indeterminate };

const char* to_string(Label label);

struct ShadowRule
{
  int min_frames{10};
  double pv_min{0.95};
  double phi_min_deg{10.0};
};

Label classify_shadow(const ClusterKinematics& k, const ShadowRule& rule = {});

struct FeatureLabel
{
  int cluster_id;
  Label label;
};

/// Drops the noise set and clusters seen in fewer than min_frames distinct frames.
std::vector<FeatureCluster> persistence_filter(const std::vector<FeatureCluster>& clusters, int min_frames = 3);

} // namespace isarff
