#include "isarff/persistence.hpp"

#include <algorithm>
#include <cmath>

namespace isarff {

IntensityFrame cumulative_image(const std::vector<IntensityFrame>& frames, Cumulative method)
{
  if (frames.empty()) throw InsufficientDataError("cumulative image of an empty sequence");
  const Eigen::Index rows = frames.front().pixels.rows(), cols = frames.front().pixels.cols();
  for (const auto& f : frames)
    if (f.pixels.rows() != rows || f.pixels.cols() != cols)
      throw ShapeMismatchError("cumulative image needs equally sized frames");

  IntensityFrame out;
  out.range_spacing = frames.front().range_spacing;
  out.crossrange_spacing = frames.front().crossrange_spacing;
  out.frame_index = 0;
  out.pixels.resize(rows, cols);
  const std::size_t n = frames.size();
  std::vector<double> stack(n);
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    for (std::size_t k = 0; k < n; ++k) stack[k] = frames[k].pixels(i);
    if (method == Cumulative::mean) {
      double s = 0.0;
      for (double v : stack) s += v;
      out.pixels(i) = s / static_cast<double>(n);
    } else {
      std::sort(stack.begin(), stack.end());
      out.pixels(i) = n % 2 ? stack[n / 2] : 0.5 * (stack[n / 2 - 1] + stack[n / 2]);
    }
  }
  return out;
}

ClusterKinematics cluster_pca(const FeatureCluster& cluster, double frame_scale)
{
  if (!(frame_scale > 0.0)) throw DomainError("frame_scale must be positive");
  const int frames = cluster.frame_count();
  if (cluster.members.size() < 3 || frames < 2)
    throw InsufficientDataError("PCA needs at least 3 members over 2 or more frames");

  const auto n = static_cast<Eigen::Index>(cluster.members.size());
  Eigen::MatrixXd X(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& m = cluster.members[static_cast<std::size_t>(i)];
    X.row(i) << m.rho_scaled, m.theta_scaled, m.frame_index * frame_scale;
  }
  const Eigen::MatrixXd centred = X.rowwise() - X.colwise().mean();
  const Eigen::Matrix3d cov = centred.transpose() * centred / static_cast<double>(n - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);

  ClusterKinematics k;
  k.frame_count = frames;
  // Eigenvalues come sorted ascending.
  k.principal_direction = eig.eigenvectors().col(2).normalized();
  const double trace = eig.eigenvalues().sum();
  k.variance_fraction = std::clamp(eig.eigenvalues()[2] / trace, 0.0, 1.0);
  const Eigen::Vector3d& v = k.principal_direction;
  k.divergence_deg = rad2deg(std::atan2(std::hypot(v[0], v[1]), std::abs(v[2])));
  return k;
}

const char* to_string(Label label)
{
  switch (label) {
  case Label::static_feature: return "static_feature";
  case Label::shadow_edge: return "shadow_edge";
  case Label::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Label classify_shadow(const ClusterKinematics& k, const ShadowRule& rule)
{
  if (k.frame_count < rule.min_frames) return Label::indeterminate;
  if (k.variance_fraction < rule.pv_min) return Label::indeterminate;
  return k.divergence_deg >= rule.phi_min_deg ? Label::shadow_edge : Label::static_feature;
}

std::vector<FeatureCluster> persistence_filter(const std::vector<FeatureCluster>& clusters, int min_frames)
{
  std::vector<FeatureCluster> out;
  for (const auto& c : clusters)
    if (!c.noise && c.frame_count() >= min_frames) out.push_back(c);
  return out;
}

} // namespace isarff
