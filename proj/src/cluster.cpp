#include "isarff/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <limits>

namespace isarff {

bool canonical_less(const ParamPoint& a, const ParamPoint& b)
{
  return std::tie(a.rho_scaled, a.theta_scaled, a.frame_index, a.duplicate, a.feature_ref) <
         std::tie(b.rho_scaled, b.theta_scaled, b.frame_index, b.duplicate, b.feature_ref);
}

int FeatureCluster::frame_count() const
{
  std::set<int> frames;
  for (const auto& m : members) frames.insert(m.frame_index);
  return static_cast<int>(frames.size());
}

std::vector<ParamPoint> scale_params(const std::vector<LineFeature>& features, double rho_extent)
{
  if (!(rho_extent > 0.0)) throw DomainError("rho_extent must be positive");
  std::vector<ParamPoint> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    out.push_back({features[i].rho / rho_extent, features[i].theta_deg / 360.0, features[i].frame_index,
                   static_cast<int>(i), false});
  return out;
}

std::vector<ParamPoint> extend_theta(const std::vector<ParamPoint>& points)
{
  std::vector<ParamPoint> out = points;
  for (const auto& p : points) {
    const double deg = p.theta_deg();
    if (std::abs(deg) <= kThetaExtendFromDeg) continue;
    ParamPoint d = p;
    d.theta_scaled = (deg > 0.0 ? deg - 360.0 : deg + 360.0) / 360.0;
    d.duplicate = true;
    out.push_back(d);
  }
  return out;
}

namespace {

double distance(const ParamPoint& a, const ParamPoint& b)
{
  return std::hypot(a.rho_scaled - b.rho_scaled, a.theta_scaled - b.theta_scaled);
}

} // namespace

std::vector<double> k_distance_curve(const std::vector<ParamPoint>& points, int k, KDistance mode)
{
  if (k < 1) throw DomainError("k must be at least 1");
  if (points.size() < static_cast<std::size_t>(k) + 1)
    throw InsufficientDataError("k-distance needs at least k + 1 points");
  std::vector<double> curve;
  curve.reserve(points.size());
  std::vector<double> d;
  for (std::size_t i = 0; i < points.size(); ++i) {
    d.clear();
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i) d.push_back(distance(points[i], points[j]));
    std::partial_sort(d.begin(), d.begin() + k, d.end());
    if (mode == KDistance::kth) {
      curve.push_back(d[k - 1]);
    } else {
      double s = 0.0;
      for (int q = 0; q < k; ++q) s += d[q];
      curve.push_back(s / k);
    }
  }
  std::sort(curve.begin(), curve.end(), std::greater<>());
  return curve;
}

double k_distance_epsilon(const std::vector<ParamPoint>& points, int k, KDistance mode)
{
  const std::vector<double> y = k_distance_curve(points, k, mode);
  const double hi = y.front(), lo = y.back();
  if (y.size() < 3 || !(hi > lo)) return y.front();
  const double n1 = static_cast<double>(y.size() - 1);
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    // Chord runs from (0, 1) to (1, 0) in normalised coordinates.
    const double d = std::abs(static_cast<double>(i) / n1 + (y[i] - lo) / (hi - lo) - 1.0);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return y[best];
}

namespace {

// Uniform grid over the plane with cell size eps; neighbour queries scan 3x3 cells.
class GridIndex
{
public:
  GridIndex(const std::vector<ParamPoint>& pts, double eps) : pts_(pts), eps_(eps), cell_(std::max(eps, 1e-12))
  {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[{cell_of(pts[i].rho_scaled), cell_of(pts[i].theta_scaled)}].push_back(i);
  }

  // Neighbours within eps (inclusive, self included) in ascending index order.
  void query(std::size_t i, std::vector<std::size_t>& out) const
  {
    out.clear();
    const long long cx = cell_of(pts_[i].rho_scaled), cy = cell_of(pts_[i].theta_scaled);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (std::size_t j : it->second)
          if (distance(pts_[i], pts_[j]) <= eps_) out.push_back(j);
      }
    std::sort(out.begin(), out.end());
  }

private:
  long long cell_of(double v) const { return static_cast<long long>(std::floor(v / cell_)); }

  const std::vector<ParamPoint>& pts_;
  double eps_;
  double cell_;
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> cells_;
};

} // namespace

std::vector<FeatureCluster> dbscan(std::vector<ParamPoint> points, double eps, int mu)
{
  if (!(eps >= 0.0)) throw DomainError("eps must be non-negative");
  if (mu < 1) throw DomainError("mu must be at least 1");
  std::sort(points.begin(), points.end(), canonical_less);

  constexpr int kUnvisited = -2, kNoise = -1;
  std::vector<int> label(points.size(), kUnvisited);
  const GridIndex index(points, eps);
  std::vector<std::size_t> nb, nb2;
  int clusters = 0;

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] != kUnvisited) continue;
    index.query(i, nb);
    if (static_cast<int>(nb.size()) < mu) {
      label[i] = kNoise;
      continue;
    }
    const int cid = clusters++;
    label[i] = cid;
    std::vector<std::size_t> queue(nb.begin(), nb.end());
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t j = queue[q];
      if (label[j] == kNoise) label[j] = cid;
      if (label[j] != kUnvisited) continue;
      label[j] = cid;
      index.query(j, nb2);
      if (static_cast<int>(nb2.size()) >= mu) queue.insert(queue.end(), nb2.begin(), nb2.end());
    }
  }

  std::vector<FeatureCluster> out(static_cast<std::size_t>(clusters));
  for (int c = 0; c < clusters; ++c) out[c].id = c + 1;
  FeatureCluster noise{0, {}, true};
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] == kNoise) noise.members.push_back(points[i]);
    else out[label[i]].members.push_back(points[i]);
  }
  if (!noise.members.empty()) out.push_back(std::move(noise));
  return out;
}

std::vector<FeatureCluster> resolve_duplicates(const std::vector<FeatureCluster>& clusters, int mu)
{
  struct Candidate
  {
    int id;
    std::size_t size;
    ParamPoint point;
  };
  std::map<int, std::vector<Candidate>> by_feature;
  std::map<int, ParamPoint> noise_point;
  for (const auto& c : clusters)
    for (const auto& m : c.members) {
      if (c.noise) {
        auto it = noise_point.find(m.feature_ref);
        if (it == noise_point.end() || (it->second.duplicate && !m.duplicate)) noise_point[m.feature_ref] = m;
      } else {
        by_feature[m.feature_ref].push_back({c.id, c.members.size(), m});
      }
    }

  std::map<int, std::vector<ParamPoint>> members;
  std::vector<ParamPoint> noise;
  for (auto& [ref, cands] : by_feature) {
    const Candidate* best = &cands.front();
    for (const auto& c : cands)
      if (c.size > best->size || (c.size == best->size && c.id < best->id)) best = &c;
    members[best->id].push_back(best->point);
    noise_point.erase(ref);
  }
  for (auto& [ref, p] : noise_point) noise.push_back(p);

  std::vector<FeatureCluster> out;
  for (auto& [id, pts] : members) {
    if (static_cast<int>(pts.size()) < mu) {
      noise.insert(noise.end(), pts.begin(), pts.end());
      continue;
    }
    std::sort(pts.begin(), pts.end(), canonical_less);
    out.push_back({static_cast<int>(out.size()) + 1, std::move(pts), false});
  }
  if (!noise.empty()) {
    std::sort(noise.begin(), noise.end(), canonical_less);
    out.push_back({0, std::move(noise), true});
  }
  return out;
}

double rho_extent_for(Eigen::Index rows, Eigen::Index cols)
{
  const double hx = 0.5 * static_cast<double>(cols - 1);
  const double hy = 0.5 * static_cast<double>(rows - 1);
  return std::sqrt(hx * hx + hy * hy);
}

Association associate_features(const std::vector<LineFeature>& features, double rho_extent,
                               const ClusterOptions& options)
{
  if (options.mu < 1) throw ConfigError("mu must be at least 1");
  Association a;
  a.mu = options.mu;
  a.rho_extent = rho_extent;
  const std::vector<ParamPoint> points = extend_theta(scale_params(features, rho_extent));
  if (options.epsilon) {
    a.epsilon = *options.epsilon;
  } else if (points.size() >= static_cast<std::size_t>(options.mu)) {
    a.epsilon = k_distance_epsilon(points, std::max(options.mu - 1, 1), options.k_distance);
  }
  a.epsilon = std::max(a.epsilon, kEpsilonMin);
  a.clusters = resolve_duplicates(dbscan(points, a.epsilon, options.mu), options.mu);
  return a;
}

double circular_median_deg(const std::vector<double>& angles_deg)
{
  if (angles_deg.empty()) throw InsufficientDataError("circular median of no angles");
  double best = angles_deg.front();
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> sorted = angles_deg;
  std::sort(sorted.begin(), sorted.end());
  for (double a : sorted) {
    double cost = 0.0;
    for (double b : sorted) cost += std::abs(wrap_deg(a - b));
    if (cost < best_cost - 1e-12) {
      best_cost = cost;
      best = a;
    }
  }
  return best;
}

namespace {

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

void rasterize_segment(LabelMap& map, const Segment& segment, std::uint16_t label)
{
  const auto frame = PixelFrame::of(map.rows(), map.cols());
  const Eigen::Vector2d d = segment.end - segment.start;
  const double len = d.norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 4.0)));
  for (int s = 0; s <= steps; ++s) {
    const Eigen::Vector2d g = frame.to_grid(segment.start + d * (static_cast<double>(s) / steps));
    const double x = std::floor(g.x() + 0.5), y = std::floor(g.y() + 0.5);
    if (x < 0 || y < 0 || x >= map.cols() || y >= map.rows()) continue;
    auto& px = map(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
    if (px == 0) px = label;
  }
}

FeatureMap reconstruct_feature_map(const std::vector<FeatureCluster>& clusters,
                                   const std::vector<LineFeature>& features, Eigen::Index rows, Eigen::Index cols,
                                   double rho_extent)
{
  FeatureMap map;
  map.labels = LabelMap::Zero(rows, cols);
  for (const auto& c : clusters) {
    if (c.noise || c.members.empty()) continue;
    std::vector<double> rhos, thetas;
    for (const auto& m : c.members) {
      if (m.feature_ref < 0 || m.feature_ref >= static_cast<int>(features.size()))
        throw DomainError("cluster member references an unknown feature");
      rhos.push_back(m.rho_px(rho_extent));
      thetas.push_back(m.theta_deg());
    }
    RepresentativeLine line{c.id, median(rhos), wrap_deg(circular_median_deg(thetas)), {}};
    const Eigen::Vector2d cs(std::cos(deg2rad(line.theta_deg)), std::sin(deg2rad(line.theta_deg)));
    const Eigen::Vector2d dir(-cs[1], cs[0]);

    std::vector<std::pair<double, double>> spans;
    for (const auto& m : c.members)
      for (const auto& s : features[m.feature_ref].segments) {
        const double a = s.start.dot(dir), b = s.end.dot(dir);
        spans.emplace_back(std::min(a, b), std::max(a, b));
      }
    std::sort(spans.begin(), spans.end());
    for (const auto& sp : spans) {
      if (!line.segments.empty() && sp.first <= line.segments.back().t_end + 1.0) {
        line.segments.back().t_end = std::max(line.segments.back().t_end, sp.second);
        continue;
      }
      line.segments.push_back({sp.first, sp.second, {}, {}});
    }
    for (auto& s : line.segments) {
      s.start = line_point(line.rho, line.theta_deg, s.t_start);
      s.end = line_point(line.rho, line.theta_deg, s.t_end);
      rasterize_segment(map.labels, s, static_cast<std::uint16_t>(c.id));
    }
    map.lines.push_back(std::move(line));
  }
  return map;
}

LabelMap cluster_track_map(const FeatureCluster& cluster, const std::vector<LineFeature>& features,
                           Eigen::Index rows, Eigen::Index cols)
{
  LabelMap map = LabelMap::Zero(rows, cols);
  for (const auto& m : cluster.members)
    for (const auto& s : features.at(static_cast<std::size_t>(m.feature_ref)).segments)
      rasterize_segment(map, s, static_cast<std::uint16_t>(std::max(cluster.id, 1)));
  return map;
}

} // namespace isarff
