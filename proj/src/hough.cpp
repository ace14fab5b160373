#include "isarff/hough.hpp"

#include <algorithm>
#include <cmath>

#include "isarff/align.hpp"
#include "isarff/parallel.hpp"

namespace isarff {

namespace {

int half_diagonal(Eigen::Index rows, Eigen::Index cols)
{
  const double hx = 0.5 * static_cast<double>(cols - 1);
  const double hy = 0.5 * static_cast<double>(rows - 1);
  return static_cast<int>(std::ceil(std::sqrt(hx * hx + hy * hy))) + 1;
}

struct TrigTable
{
  std::vector<double> c, s;

  explicit TrigTable(const HoughAxes& axes)
  {
    c.resize(static_cast<std::size_t>(axes.theta_bins));
    s.resize(c.size());
    for (int j = 0; j < axes.theta_bins; ++j) {
      const Eigen::Vector2d cs = exact_cos_sin(deg2rad(axes.theta_of(j)));
      c[j] = cs[0];
      s[j] = cs[1];
    }
  }
};

struct Voter
{
  double x, y, weight, direction_deg, norm;
};

std::vector<Voter> collect_voters(const Mask& mask, const ImageD* magnitude, const ImageD* direction)
{
  const auto frame = PixelFrame::of(mask.rows(), mask.cols());
  std::vector<Voter> voters;
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      const Eigen::Vector2d p = frame.to_centred(static_cast<double>(c), static_cast<double>(r));
      voters.push_back({p.x(), p.y(), magnitude ? (*magnitude)(r, c) : 1.0,
                        direction ? rad2deg((*direction)(r, c)) : 0.0, 1.0});
    }
  return voters;
}

double circular_distance_deg(double a, double b)
{
  return std::abs(wrap_deg(a - b));
}

} // namespace

HoughAxes HoughAxes::half_turn(Eigen::Index rows, Eigen::Index cols, int theta_bins)
{
  return {half_diagonal(rows, cols), 0.0, 180.0 / theta_bins, theta_bins};
}

HoughAxes HoughAxes::full_turn(Eigen::Index rows, Eigen::Index cols, int theta_bins)
{
  return {half_diagonal(rows, cols), -180.0, 360.0 / theta_bins, theta_bins};
}

double HoughAccumulator::peak_to_mean() const
{
  const double mean = values.mean();
  return mean > 0.0 ? values.maxCoeff() / mean : 0.0;
}

HoughAccumulator standard_hough(const Mask& mask, int theta_bins)
{
  HoughAccumulator acc;
  acc.axes = HoughAxes::half_turn(mask.rows(), mask.cols(), theta_bins);
  acc.values = ImageD::Zero(acc.axes.rho_bins(), theta_bins);
  const TrigTable trig(acc.axes);
  for (const auto& v : collect_voters(mask, nullptr, nullptr))
    for (int j = 0; j < theta_bins; ++j) acc.values(acc.axes.rho_bin(v.x * trig.c[j] + v.y * trig.s[j]), j) += 1.0;
  return acc;
}

HoughAccumulator weighted_hough(const Mask& mask, const ImageD& magnitude, const ImageD& direction,
                                const HoughOptions& options, int theta_bins)
{
  if (mask.rows() != magnitude.rows() || mask.cols() != magnitude.cols() || mask.rows() != direction.rows() ||
      mask.cols() != direction.cols())
    throw ShapeMismatchError("mask, magnitude and direction must be co-registered");
  if (!(options.sigma_dir_deg > 0.0)) throw DomainError("sigma_dir must be positive");

  HoughAccumulator acc;
  acc.axes = HoughAxes::full_turn(mask.rows(), mask.cols(), theta_bins);
  acc.values = ImageD::Zero(acc.axes.rho_bins(), theta_bins);
  const TrigTable trig(acc.axes);
  std::vector<Voter> voters = collect_voters(mask, &magnitude, &direction);

  const bool gaussian = options.direction_weight == DirectionWeight::gaussian;
  const double inv_two_sigma2 = 1.0 / (2.0 * options.sigma_dir_deg * options.sigma_dir_deg);
  auto kernel = [&](const Voter& v, int j) {
    const double d = circular_distance_deg(acc.axes.theta_of(j), v.direction_deg);
    return std::exp(-d * d * inv_two_sigma2);
  };
  if (gaussian) {
    parallel_for(voters.size(), options.threads, [&](std::size_t i) {
      double z = 0.0;
      for (int j = 0; j < theta_bins; ++j) z += kernel(voters[i], j);
      voters[i].norm = z;
    });
  }
  // Each theta column is owned by one worker and summed in raster order.
  parallel_for(static_cast<std::size_t>(theta_bins), options.threads, [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (const auto& v : voters) {
      const double w = gaussian ? v.weight * kernel(v, j) / v.norm : v.weight;
      acc.values(acc.axes.rho_bin(v.x * trig.c[j] + v.y * trig.s[j]), j) += w;
    }
  });
  return acc;
}

std::vector<HoughPeak> detect_peaks(const HoughAccumulator& acc, const PeakOptions& options)
{
  if (!(options.min_fraction > 0.0 && options.min_fraction <= 1.0))
    throw DomainError("min_fraction must lie in (0, 1]");
  std::vector<HoughPeak> peaks;
  if (acc.values.size() == 0) return peaks;
  ImageD work = acc.values;
  const double global = work.maxCoeff();
  if (!(global > 0.0)) return peaks;
  const double floor = options.min_fraction * global;
  const int rho_bins = static_cast<int>(work.rows());
  const int theta_bins = static_cast<int>(work.cols());
  const int hr = options.nhood_rho / 2;
  const int ht = options.nhood_theta / 2;

  while (true) {
    Eigen::Index r = 0, c = 0;
    double v = work(0, 0);
    for (Eigen::Index i = 0; i < work.rows(); ++i)
      for (Eigen::Index j = 0; j < work.cols(); ++j)
        if (work(i, j) > v) {
          v = work(i, j);
          r = i;
          c = j;
        }
    if (!(v > 0.0) || v < floor) break;
    peaks.push_back({acc.axes.rho_of(static_cast<int>(r)), acc.axes.theta_of(static_cast<int>(c)), v,
                     static_cast<int>(r), static_cast<int>(c)});
    for (int dr = -hr; dr <= hr; ++dr) {
      const int rr = static_cast<int>(r) + dr;
      if (rr < 0 || rr >= rho_bins) continue;
      for (int dc = -ht; dc <= ht; ++dc) work(rr, ((static_cast<int>(c) + dc) % theta_bins + theta_bins) % theta_bins) = 0.0;
    }
  }
  return peaks;
}

Eigen::Vector2d line_point(double rho, double theta_deg, double t)
{
  const Eigen::Vector2d cs = exact_cos_sin(deg2rad(theta_deg));
  return rho * cs + t * Eigen::Vector2d(-cs[1], cs[0]);
}

std::vector<Segment> localize_feature(const Mask& mask, double rho, double theta_deg, const LocalizeOptions& options)
{
  const Eigen::Vector2d cs = exact_cos_sin(deg2rad(theta_deg));
  const auto frame = PixelFrame::of(mask.rows(), mask.cols());
  std::vector<double> ts;
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      const Eigen::Vector2d p = frame.to_centred(static_cast<double>(c), static_cast<double>(r));
      if (std::abs(p.x() * cs[0] + p.y() * cs[1] - rho) <= options.perpendicular_tolerance)
        ts.push_back(-p.x() * cs[1] + p.y() * cs[0]);
    }
  std::sort(ts.begin(), ts.end());

  std::vector<Segment> out;
  auto flush = [&](double t0, double t1) {
    if (t1 - t0 + 1.0 < options.min_length) return;
    out.push_back({t0, t1, line_point(rho, theta_deg, t0), line_point(rho, theta_deg, t1)});
  };
  if (ts.empty()) return out;
  const double join = options.gap_tolerance + 1.5;
  double start = ts.front(), last = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i] - last > join) {
      flush(start, last);
      start = ts[i];
    }
    last = ts[i];
  }
  flush(start, last);
  return out;
}

} // namespace isarff
