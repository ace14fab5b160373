#pragma once

#include <vector>

#include "isarff/types.hpp"

namespace isarff {

/// Uniform (rho, theta) binning. rho bins have unit-pixel width centred on integers
/// -R..R with R = ceil(half diagonal); theta bins have centres lo + (j + 1) * width.
struct HoughAxes
{
  int rho_half{0};
  double theta_lo_deg{0.0};  // exclusive lower edge of the axis
  double theta_step_deg{1.0};
  int theta_bins{180};

  static HoughAxes half_turn(Eigen::Index rows, Eigen::Index cols, int theta_bins = 180);
  static HoughAxes full_turn(Eigen::Index rows, Eigen::Index cols, int theta_bins = 360);

  int rho_bins() const { return 2 * rho_half + 1; }
  double rho_of(int bin) const { return static_cast<double>(bin - rho_half); }
  int rho_bin(double rho) const { return static_cast<int>(std::lround(rho)) + rho_half; }
  double theta_of(int bin) const { return theta_lo_deg + (bin + 1) * theta_step_deg; }
};

struct HoughAccumulator
{
  HoughAxes axes;
  ImageD values; // rows: rho bins, cols: theta bins

  double peak_to_mean() const;
};

enum class DirectionWeight { gaussian, uniform };

struct HoughOptions
{
  double sigma_dir_deg{10.0};
  DirectionWeight direction_weight{DirectionWeight::gaussian};
  int threads{1};
};

/// Binary voting over (0, 180].
HoughAccumulator standard_hough(const Mask& mask, int theta_bins = 180);

/// Votes G(x, y) * D_G(theta) over (-180, 180]; D_G is a Gaussian in theta about the
/// pixel's edge-normal direction, normalised to unit sum over theta bins. With
/// DirectionWeight::uniform every bin gets direction weight 1.
HoughAccumulator weighted_hough(const Mask& mask, const ImageD& magnitude, const ImageD& direction,
                                const HoughOptions& options = {}, int theta_bins = 360);

struct HoughPeak
{
  double rho;
  double theta_deg;
  double strength;
  int rho_bin;
  int theta_bin;
};

struct PeakOptions
{
  double min_fraction{0.3};
  int nhood_rho{5};
  int nhood_theta{5};
};

/// Greedy non-maximum suppression; theta wraps cyclically. Ties: lowest rho bin, then theta bin.
std::vector<HoughPeak> detect_peaks(const HoughAccumulator& acc, const PeakOptions& options = {});

struct Segment
{
  double t_start, t_end;   // line-parameter coordinates along the direction (-sin, cos)
  Eigen::Vector2d start;   // centre-origin pixel coordinates on the ideal line
  Eigen::Vector2d end;

  double length() const { return t_end - t_start + 1.0; }
};

struct LocalizeOptions
{
  double gap_tolerance{3.0};
  double min_length{8.0};
  double perpendicular_tolerance{1.0};
};

std::vector<Segment> localize_feature(const Mask& mask, double rho, double theta_deg,
                                      const LocalizeOptions& options = {});

struct LineFeature
{
  double rho{0.0};
  double theta_deg{0.0};
  double strength{0.0};
  std::vector<Segment> segments;
  int frame_index{0};
};

/// Point on the line at parameter t.
Eigen::Vector2d line_point(double rho, double theta_deg, double t);

} // namespace isarff
