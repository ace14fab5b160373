#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "isarff/cluster.hpp"

namespace oracle {

using isarff::ParamPoint;

/// Exhaustive DBSCAN: core points by O(n^2) neighbour counts, clusters as connected
/// components of core points (union-find), numbered by their lowest canonical index;
/// each border point joins the lowest-numbered cluster owning one of its core neighbours.
/// Returns one label per point in canonical order (0 = noise).
inline std::vector<int> dbscan_labels(std::vector<ParamPoint> pts, double eps, int mu)
{
  std::sort(pts.begin(), pts.end(), isarff::canonical_less);
  const std::size_t n = pts.size();
  auto near = [&](std::size_t i, std::size_t j) {
    return std::hypot(pts[i].rho_scaled - pts[j].rho_scaled, pts[i].theta_scaled - pts[j].theta_scaled) <= eps;
  };
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) count += near(i, j) ? 1 : 0;
    core[i] = count >= mu;
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (core[i] && core[j] && near(i, j)) {
        const std::size_t a = find(i), b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }
  // Roots are the lowest index of each component; number components in root order.
  std::vector<int> id_of_root(n, 0);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (core[i] && find(i) == i) id_of_root[i] = ++next;
  std::vector<int> label(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      label[i] = id_of_root[find(i)];
      continue;
    }
    int best = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (core[j] && near(i, j)) {
        const int id = id_of_root[find(j)];
        if (best == 0 || id < best) best = id;
      }
    label[i] = best;
  }
  return label;
}

/// Labels produced by the library, laid out in canonical order.
inline std::vector<int> library_labels(const std::vector<ParamPoint>& pts, double eps, int mu)
{
  std::vector<ParamPoint> sorted = pts;
  std::sort(sorted.begin(), sorted.end(), isarff::canonical_less);
  std::vector<int> label(sorted.size(), -1);
  for (const auto& c : isarff::dbscan(pts, eps, mu))
    for (const auto& m : c.members) {
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), m, isarff::canonical_less);
      label[static_cast<std::size_t>(it - sorted.begin())] = c.noise ? 0 : c.id;
    }
  return label;
}

/// Random 2D point set mixing blobs and background with a few exact duplicates.
inline std::vector<ParamPoint> random_points(std::mt19937_64& rng, std::size_t n)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 0.03);
  std::vector<ParamPoint> pts;
  const int blobs = 1 + static_cast<int>(rng() % 5);
  std::vector<std::pair<double, double>> centres;
  for (int b = 0; b < blobs; ++b) centres.emplace_back(u(rng), u(rng));
  for (std::size_t i = 0; i < n; ++i) {
    ParamPoint p;
    if (rng() % 4 == 0) {
      p.rho_scaled = u(rng);
      p.theta_scaled = u(rng);
    } else {
      const auto& c = centres[rng() % centres.size()];
      p.rho_scaled = c.first + g(rng);
      p.theta_scaled = c.second + g(rng);
    }
    if (i > 0 && rng() % 20 == 0) {
      p.rho_scaled = pts.back().rho_scaled;
      p.theta_scaled = pts.back().theta_scaled;
    }
    p.frame_index = static_cast<int>(i % 7);
    p.feature_ref = static_cast<int>(i);
    pts.push_back(p);
  }
  return pts;
}

} // namespace oracle
