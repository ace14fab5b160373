#include "isarff/edges.hpp"

#include <cmath>

#include "isarff/imgproc.hpp"

namespace isarff {

namespace {

// Running exponential mean with the update y += (1 - b) (x - y); constant input stays exact.
void causal_pass(Eigen::ArrayXd& y, const Eigen::ArrayXd& x, double b)
{
  const Eigen::Index n = x.size();
  y.resize(n);
  if (n == 0) return;
  y[0] = x[0];
  for (Eigen::Index i = 1; i < n; ++i) y[i] = y[i - 1] + (1.0 - b) * (x[i] - y[i - 1]);
}

void anticausal_pass(Eigen::ArrayXd& y, const Eigen::ArrayXd& x, double b)
{
  const Eigen::Index n = x.size();
  y.resize(n);
  if (n == 0) return;
  y[n - 1] = x[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) y[i] = y[i + 1] + (1.0 - b) * (x[i] - y[i + 1]);
}

// Symmetric exponential smoothing as a causal then anti-causal cascade.
Eigen::ArrayXd smooth(const Eigen::ArrayXd& x, double b)
{
  Eigen::ArrayXd c, s;
  causal_pass(c, x, b);
  anticausal_pass(s, c, b);
  return s;
}

// Smooths every column, then takes the horizontal log-ratio along every row.
ImageD horizontal_ratio(const ImageD& a, double b)
{
  const Eigen::Index rows = a.rows(), cols = a.cols();
  ImageD smoothed(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) smoothed.col(c) = smooth(a.col(c), b);
  ImageD g(rows, cols);
  Eigen::ArrayXd left, right;
  for (Eigen::Index r = 0; r < rows; ++r) {
    one_sided_means(smoothed.row(r).transpose(), b, left, right);
    g.row(r) = (right / left).log().transpose();
  }
  return g;
}

} // namespace

void one_sided_means(const Eigen::ArrayXd& x, double b, Eigen::ArrayXd& causal, Eigen::ArrayXd& anticausal)
{
  const Eigen::Index n = x.size();
  Eigen::ArrayXd c, a;
  causal_pass(c, x, b);
  anticausal_pass(a, x, b);
  causal.resize(n);
  anticausal.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    causal[i] = i > 0 ? c[i - 1] : x[0];
    anticausal[i] = i + 1 < n ? a[i + 1] : x[n - 1];
  }
}

Gradients roewa_gradients(const ImageD& amplitude, double b)
{
  if (!(b > 0.0 && b < 1.0)) throw DomainError("ROEWA coefficient b must lie in (0, 1)");
  if (amplitude.size() == 0) throw DimensionError("empty image");
  if (!(amplitude.minCoeff() > 0.0) || !amplitude.allFinite())
    throw DomainError("ROEWA needs strictly positive finite amplitudes");
  Gradients g;
  g.gx = horizontal_ratio(amplitude, b);
  const ImageD t = amplitude.transpose();
  g.gy = horizontal_ratio(t, b).transpose();
  return g;
}

ImageD to_amplitude(const IntensityFrame& frame)
{
  ImageD a = (frame.pixels / 20.0 * std::log(10.0)).exp();
  const double floor = 1e-6 * (a.size() ? a.maxCoeff() : 0.0);
  return a + floor;
}

Gradients roewa_gradients(const IntensityFrame& frame, double b)
{
  return roewa_gradients(to_amplitude(frame), b);
}

MagnitudeDirection gradient_magnitude_direction(const ImageD& gx, const ImageD& gy)
{
  if (gx.rows() != gy.rows() || gx.cols() != gy.cols()) throw ShapeMismatchError("gradient grids differ in shape");
  MagnitudeDirection out;
  out.magnitude = (gx.square() + gy.square()).sqrt();
  out.direction.resize(gx.rows(), gx.cols());
  for (Eigen::Index i = 0; i < gx.size(); ++i) {
    if (out.magnitude(i) == 0.0) {
      out.direction(i) = 0.0;
      continue;
    }
    double t = std::atan2(gy(i), gx(i));
    if (t <= -kPi) t = kPi;
    out.direction(i) = t;
  }
  return out;
}

Mask significance_mask(const ImageD& magnitude, int min_area)
{
  if (!magnitude.allFinite()) throw DomainError("gradient magnitude must be finite");
  const double hi = magnitude.size() ? magnitude.maxCoeff() : 0.0;
  if (!(hi > 0.0)) return Mask::Zero(magnitude.rows(), magnitude.cols());
  return remove_small_components(otsu_mask(magnitude, Histogram{0.0, hi, 256}), min_area);
}

GradientField compute_gradient_field(const IntensityFrame& frame, const EdgeOptions& options)
{
  GradientField f;
  Gradients g = roewa_gradients(frame, options.b);
  auto md = gradient_magnitude_direction(g.gx, g.gy);
  f.gx = std::move(g.gx);
  f.gy = std::move(g.gy);
  f.magnitude = std::move(md.magnitude);
  f.direction = std::move(md.direction);
  f.mask = significance_mask(f.magnitude, options.min_area);
  return f;
}

} // namespace isarff
