#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isarff {

/// Row-major dense raster. Rows run down the image (y), columns to the right (x).
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ImageD = Image<double>;
using ImageC = Image<std::complex<double>>;
using Mask = Image<std::uint8_t>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle in degrees into (-180, 180].
inline double wrap_deg(double deg)
{
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

/// Centre-origin pixel coordinates: x = col - (cols-1)/2, y = row - (rows-1)/2.
struct PixelFrame
{
  double cx;
  double cy;

  static PixelFrame of(Eigen::Index rows, Eigen::Index cols)
  {
    return {0.5 * static_cast<double>(cols - 1), 0.5 * static_cast<double>(rows - 1)};
  }
  Eigen::Vector2d to_centred(double col, double row) const { return {col - cx, row - cy}; }
  Eigen::Vector2d to_grid(const Eigen::Vector2d& p) const { return {p.x() + cx, p.y() + cy}; }
};

// Error taxonomy. Every failure the library reports derives from Error.
struct Error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct ShapeMismatchError : Error { using Error::Error; };
struct DegenerateTransformError : Error { using Error::Error; };
struct SegmentationError : Error { using Error::Error; };
struct AmbiguousAxisError : Error { using Error::Error; };
struct InsufficientDataError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };

} // namespace isarff
