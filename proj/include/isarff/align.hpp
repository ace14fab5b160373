#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "isarff/isar_sim.hpp"
#include "isarff/types.hpp"

namespace isarff {

/// Parameters of I' = A I + S with A = scale * shear * rotation. The scale acts
/// along the direction scale_axis (cx) and across it (cy); with scale_axis = 0
/// that is the plain diag(cx, cy).
struct AffineParams
{
  double cx{1.0}, cy{1.0}; // scale
  double dx{0.0}, dy{0.0}; // shear
  double theta{0.0};       // rotation, radians
  double sx{0.0}, sy{0.0}; // translation, pixels
  double scale_axis{0.0};  // radians
};

struct Affine2
{
  Eigen::Matrix2d A{Eigen::Matrix2d::Identity()};
  Eigen::Vector2d S{Eigen::Vector2d::Zero()};

  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const { return A * p + S; }
};

/// cos/sin that are exact at multiples of a quarter turn.
Eigen::Vector2d exact_cos_sin(double theta);

Affine2 compose_affine(const AffineParams& p);

enum class Interp { nearest, bilinear };

/// Inverse-maps every output pixel through the transform (centre-origin pixel
/// coordinates); samples falling outside the source take `fill`.
template <typename Scalar>
Image<Scalar> warp_affine(const Image<Scalar>& src, const Affine2& t, Interp interp, Scalar fill)
{
  if (std::abs(t.A.determinant()) < 1e-12) throw DegenerateTransformError("affine transform is singular");
  const Eigen::Matrix2d inv = t.A.inverse();
  const auto frame = PixelFrame::of(src.rows(), src.cols());
  const Eigen::Index rows = src.rows(), cols = src.cols();
  Image<Scalar> out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::Vector2d q = frame.to_centred(static_cast<double>(c), static_cast<double>(r));
      const Eigen::Vector2d g = frame.to_grid(inv * (q - t.S));
      if (interp == Interp::nearest) {
        const double x = std::floor(g.x() + 0.5), y = std::floor(g.y() + 0.5);
        const bool inside = x >= 0 && y >= 0 && x < cols && y < rows;
        out(r, c) = inside ? src(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) : fill;
        continue;
      }
      const double x0 = std::floor(g.x()), y0 = std::floor(g.y());
      const double fx = g.x() - x0, fy = g.y() - y0;
      double acc = 0.0;
      bool inside = true;
      for (int dy = 0; dy <= 1 && inside; ++dy)
        for (int dx = 0; dx <= 1; ++dx) {
          const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
          if (w == 0.0) continue;
          const double x = x0 + dx, y = y0 + dy;
          if (x < 0 || y < 0 || x >= cols || y >= rows) {
            inside = false;
            break;
          }
          acc += w * static_cast<double>(src(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)));
        }
      out(r, c) = inside ? static_cast<Scalar>(acc) : fill;
    }
  return out;
}

IntensityFrame apply_affine(const IntensityFrame& frame, const AffineParams& p, Interp interp,
                            double fill_db);

struct SegmentOptions
{
  int min_area{12};
};

/// Coarse target/background split: Otsu on dB values, 3x3 closing, small-component removal.
Mask segment_target(const IntensityFrame& frame, const SegmentOptions& options = {});

/// Principal-axis orientation of the set pixels in (-pi/2, pi/2], measured from +x towards +y.
double estimate_attitude_axis(const Mask& mask);

enum class FrameStatus { ok, unaligned };

struct AlignOptions
{
  int min_area{12};
  double fill_db{-40.0};
  Interp interp{Interp::bilinear};
  bool enable_shear{false};
  std::optional<int> reference_index; // default: largest segmented area
  int threads{1};
};

struct AlignedSequence
{
  std::vector<IntensityFrame> frames;
  std::vector<AffineParams> params;
  std::vector<FrameStatus> status;
  int reference_index{0};
};

AlignedSequence align_sequence(const std::vector<IntensityFrame>& frames, const AlignOptions& options = {});

} // namespace isarff
