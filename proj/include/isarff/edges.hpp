#pragma once

#include "isarff/isar_sim.hpp"
#include "isarff/types.hpp"

namespace isarff {

struct GradientField
{
  ImageD gx, gy;      // log-ratio gradient components
  ImageD magnitude;   // G
  ImageD direction;   // Theta, radians in (-pi, pi]
  Mask mask;          // significance mask
};

struct EdgeOptions
{
  double b{0.73};     // exponential decay of the one-sided averages, in (0, 1)
  int min_area{12};
};

struct Gradients
{
  ImageD gx, gy;
};

/// Ratio of exponentially weighted averages on a strictly positive amplitude image.
/// gx = log(mean right / mean left), gy = log(mean below / mean above); the centre
/// pixel is excluded from both one-sided means and the orthogonal axis is smoothed
/// with the symmetric exponential filter.
Gradients roewa_gradients(const ImageD& amplitude, double b);

/// dB frame: converted to linear amplitude with a floor of 1e-6 * max added.
Gradients roewa_gradients(const IntensityFrame& frame, double b);

/// Linear amplitude of a dB frame, 10^(dB/20), plus the positive floor.
ImageD to_amplitude(const IntensityFrame& frame);

struct MagnitudeDirection
{
  ImageD magnitude;
  ImageD direction;
};

/// Theta is the edge-normal direction: atan2(gy, gx), so a rising edge along +x gives 0.
MagnitudeDirection gradient_magnitude_direction(const ImageD& gx, const ImageD& gy);

/// Otsu threshold on G (256 bins over [0, max G]) followed by small-component removal.
Mask significance_mask(const ImageD& magnitude, int min_area);

GradientField compute_gradient_field(const IntensityFrame& frame, const EdgeOptions& options = {});

// One-sided exponential means along a 1D signal (exposed for testing).
// causal[n] averages x[0..n-1] (x[0] when n == 0); anticausal[n] averages x[n+1..].
void one_sided_means(const Eigen::ArrayXd& x, double b, Eigen::ArrayXd& causal, Eigen::ArrayXd& anticausal);

} // namespace isarff
