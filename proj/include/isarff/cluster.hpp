#pragma once

#include <optional>
#include <vector>

#include "isarff/hough.hpp"
#include "isarff/types.hpp"

namespace isarff {

struct ParamPoint
{
  double rho_scaled{0.0};
  double theta_scaled{0.0};
  int frame_index{0};
  int feature_ref{0};     // index into the feature list
  bool duplicate{false};  // theta-extension copy of another point

  double rho_px(double rho_extent) const { return rho_scaled * rho_extent; }
  double theta_deg() const { return theta_scaled * 360.0; }
};

/// Canonical order: (rho_scaled, theta_scaled, frame_index, duplicate, feature_ref).
bool canonical_less(const ParamPoint& a, const ParamPoint& b);

struct FeatureCluster
{
  int id{0};   // 1-based for clusters; 0 for the noise set
  std::vector<ParamPoint> members;
  bool noise{false};

  int frame_count() const;
};

/// rho / rho_extent and theta / 360 degrees.
std::vector<ParamPoint> scale_params(const std::vector<LineFeature>& features, double rho_extent);

inline constexpr double kThetaExtendFromDeg = 160.0;

/// Appends copies of points with |theta| > 160 degrees shifted by -/+360 degrees.
std::vector<ParamPoint> extend_theta(const std::vector<ParamPoint>& points);

enum class KDistance { mean_of_k, kth };

/// Elbow of the descending k-distance curve (max distance to the endpoint chord,
/// both axes normalised to [0, 1]).
double k_distance_epsilon(const std::vector<ParamPoint>& points, int k, KDistance mode = KDistance::mean_of_k);

/// Descending k-distance curve (exposed for diagnostics and tests).
std::vector<double> k_distance_curve(const std::vector<ParamPoint>& points, int k, KDistance mode);

inline constexpr double kEpsilonMin = 1e-6;

/// Density clustering on the canonically ordered points. Neighbourhoods include the
/// point itself and use distance <= eps. Clusters are numbered from 1 in creation
/// order; border points go to the first cluster that claims them. A trailing entry
/// with noise = true holds the noise points, if any.
std::vector<FeatureCluster> dbscan(std::vector<ParamPoint> points, double eps, int mu);

/// Gives every physical feature exactly one membership: original and duplicate go to
/// the cluster that had more members (ties: lower id). Clusters left with fewer than mu
/// members fall to noise; survivors are renumbered in order.
std::vector<FeatureCluster> resolve_duplicates(const std::vector<FeatureCluster>& clusters, int mu);

struct ClusterOptions
{
  int mu{4};                         // 2 * D with D = 2
  std::optional<double> epsilon;     // override; default from the k-distance elbow
  KDistance k_distance{KDistance::mean_of_k};
};

struct Association
{
  std::vector<FeatureCluster> clusters; // includes the noise entry when present
  double epsilon{0.0};
  int mu{4};
  double rho_extent{1.0};
};

Association associate_features(const std::vector<LineFeature>& features, double rho_extent,
                               const ClusterOptions& options = {});

/// Largest |rho| reachable in a frame with centre-origin coordinates.
double rho_extent_for(Eigen::Index rows, Eigen::Index cols);

struct RepresentativeLine
{
  int cluster_id;
  double rho;
  double theta_deg;
  std::vector<Segment> segments;
};

using LabelMap = Image<std::uint16_t>;

struct FeatureMap
{
  LabelMap labels;
  std::vector<RepresentativeLine> lines;
};

/// Circular median: the member angle with the least summed wrapped distance to the rest.
double circular_median_deg(const std::vector<double>& angles_deg);

FeatureMap reconstruct_feature_map(const std::vector<FeatureCluster>& clusters,
                                   const std::vector<LineFeature>& features, Eigen::Index rows, Eigen::Index cols,
                                   double rho_extent);

/// Paints a segment of the given label (existing labels are kept).
void rasterize_segment(LabelMap& map, const Segment& segment, std::uint16_t label);

/// Every member's own segments painted with the cluster id: one band per appearance.
LabelMap cluster_track_map(const FeatureCluster& cluster, const std::vector<LineFeature>& features,
                           Eigen::Index rows, Eigen::Index cols);

} // namespace isarff
