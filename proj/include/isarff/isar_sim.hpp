#pragma once

#include <span>
#include <vector>

#include "isarff/scene.hpp"
#include "isarff/types.hpp"

namespace isarff {

/// Complex backscatter samples indexed (frequency, angle).
struct PhaseHistory
{
  ImageC samples;                // rows: frequency, cols: angle
  std::vector<double> frequencies; // Hz, strictly increasing
  std::vector<double> angles;      // radians about the aperture centre

  double centre_frequency() const;
  double bandwidth() const;       // N * frequency step
  double integration_angle() const; // M * angle step, radians
};

struct ComplexFrame
{
  ImageC pixels;                 // rows: cross-range (y), cols: range (x)
  double range_spacing{0.0};     // metres per column
  double crossrange_spacing{0.0};// metres per row
  int frame_index{0};

  bool has_square_cells(double tolerance = 0.01) const;
};

struct IntensityFrame
{
  ImageD pixels;                 // dB, normalised so the peak is 0
  double range_spacing{0.0};
  double crossrange_spacing{0.0};
  int frame_index{0};
};

enum class Window { none, hanning };

/// Cell-centred sample axes: N samples of width B/N over [fc - B/2, fc + B/2].
std::vector<double> frequency_axis(double centre_frequency, double bandwidth, int samples);
/// M samples of width omega/M over [-omega/2, omega/2], radians.
std::vector<double> angle_axis(double integration_angle_rad, int samples);

PhaseHistory backscatter_field(std::span<const ProjectedScatterer> scatterers,
                               std::span<const double> frequencies,
                               std::span<const double> angles);

ComplexFrame form_image(const PhaseHistory& history, Window window, int zero_pad_factor);

double range_resolution(double bandwidth_hz);
double cross_range_resolution(double centre_frequency_hz, double integration_angle_rad);

IntensityFrame to_intensity(const ComplexFrame& frame, double dynamic_range_db);

/// Symmetric Hann taper of length n.
Eigen::ArrayXd hanning(int n);

/// Full chain for one aperture: project, field, image.
ComplexFrame simulate_frame(const ScattererModel& model, const FrameAperture& aperture,
                            const EncounterConfig& config, Window window, int zero_pad_factor);

} // namespace isarff
