#include "isarff/isar_sim.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace isarff {

double PhaseHistory::centre_frequency() const
{
  double sum = 0.0;
  for (double f : frequencies) sum += f;
  return sum / static_cast<double>(frequencies.size());
}

double PhaseHistory::bandwidth() const
{
  const auto n = frequencies.size();
  return (frequencies.back() - frequencies.front()) / static_cast<double>(n - 1) * static_cast<double>(n);
}

double PhaseHistory::integration_angle() const
{
  const auto m = angles.size();
  return (angles.back() - angles.front()) / static_cast<double>(m - 1) * static_cast<double>(m);
}

bool ComplexFrame::has_square_cells(double tolerance) const
{
  return std::abs(range_spacing - crossrange_spacing) <= tolerance * std::max(range_spacing, crossrange_spacing);
}

std::vector<double> frequency_axis(double centre_frequency, double bandwidth, int samples)
{
  std::vector<double> f(static_cast<std::size_t>(samples));
  const double step = bandwidth / samples;
  for (int n = 0; n < samples; ++n) f[n] = centre_frequency - 0.5 * bandwidth + (n + 0.5) * step;
  return f;
}

std::vector<double> angle_axis(double integration_angle_rad, int samples)
{
  std::vector<double> a(static_cast<std::size_t>(samples));
  const double step = integration_angle_rad / samples;
  for (int m = 0; m < samples; ++m) a[m] = -0.5 * integration_angle_rad + (m + 0.5) * step;
  return a;
}

PhaseHistory backscatter_field(std::span<const ProjectedScatterer> scatterers,
                               std::span<const double> frequencies,
                               std::span<const double> angles)
{
  if (frequencies.empty() || angles.empty()) throw DimensionError("phase history axes must be non-empty");
  const auto N = static_cast<Eigen::Index>(frequencies.size());
  const auto M = static_cast<Eigen::Index>(angles.size());
  PhaseHistory h;
  h.samples = ImageC::Zero(N, M);
  h.frequencies.assign(frequencies.begin(), frequencies.end());
  h.angles.assign(angles.begin(), angles.end());

  // Phase is accumulated in cycles at extended precision and reduced before the
  // trigonometry, so double rounding of arguments in the thousands of radians
  // does not reach the samples.
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  std::vector<long double> two_over_lambda(static_cast<std::size_t>(N));
  for (Eigen::Index n = 0; n < N; ++n)
    two_over_lambda[n] = 2.0L * static_cast<long double>(frequencies[n]) / static_cast<long double>(kSpeedOfLight);

  for (Eigen::Index m = 0; m < M; ++m) {
    const long double c = std::cos(static_cast<long double>(angles[m]));
    const long double s = std::sin(static_cast<long double>(angles[m]));
    for (const auto& sc : scatterers) {
      if (sc.amplitude == 0.0) continue;
      const long double along = sc.x * c + sc.y * s;
      for (Eigen::Index n = 0; n < N; ++n) {
        const long double cycles = two_over_lambda[n] * along;
        const long double frac = cycles - std::nearbyint(cycles);
        h.samples(n, m) += std::polar(sc.amplitude, static_cast<double>(-two_pi * frac));
      }
    }
  }
  return h;
}

Eigen::ArrayXd hanning(int n)
{
  Eigen::ArrayXd w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / (n - 1));
  return w;
}

namespace {

// Unscaled inverse DFT of each row in place.
void inverse_rows(ImageC& a)
{
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<std::complex<double>> in(static_cast<std::size_t>(a.cols())), out;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) in[c] = a(r, c);
    fft.inv(out, in);
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = out[c];
  }
}

Eigen::Index wrap_index(Eigen::Index i, Eigen::Index n) { return ((i % n) + n) % n; }

} // namespace

ComplexFrame form_image(const PhaseHistory& history, Window window, int zero_pad_factor)
{
  if (zero_pad_factor < 1) throw DomainError("zero_pad_factor must be at least 1");
  const Eigen::Index N = history.samples.rows();
  const Eigen::Index M = history.samples.cols();
  if (N < 2 || M < 2) throw DimensionError("phase history must be at least 2x2");
  if (static_cast<Eigen::Index>(history.frequencies.size()) != N ||
      static_cast<Eigen::Index>(history.angles.size()) != M)
    throw DimensionError("phase history axes do not match sample grid");

  const Eigen::Index P = N * zero_pad_factor; // range pixels (columns)
  const Eigen::Index Q = M * zero_pad_factor; // cross-range pixels (rows)

  Eigen::ArrayXd wf = Eigen::ArrayXd::Ones(N);
  Eigen::ArrayXd wa = Eigen::ArrayXd::Ones(M);
  if (window == Window::hanning) {
    wf = hanning(static_cast<int>(N));
    wa = hanning(static_cast<int>(M));
  }

  // grid(m, n): angle along rows, frequency along columns.
  ImageC grid = ImageC::Zero(Q, P);
  for (Eigen::Index m = 0; m < M; ++m)
    for (Eigen::Index n = 0; n < N; ++n) grid(m, n) = history.samples(n, m) * (wf[n] * wa[m]);

  inverse_rows(grid);
  ImageC t = grid.transpose();
  inverse_rows(t);
  grid = t.transpose();

  const double bandwidth = history.bandwidth();
  const double omega = history.integration_angle();
  const double f0_over_b = history.frequencies.front() / bandwidth;
  const double phi0_over_omega = history.angles.front() / omega;
  const double scale = 1.0 / std::sqrt(static_cast<double>(P * Q));

  ComplexFrame out;
  out.pixels.resize(Q, P);
  for (Eigen::Index i = 0; i < Q; ++i) {
    const Eigen::Index r = i - Q / 2;
    const std::complex<double> ramp_y =
        std::polar(1.0, 2.0 * kPi * static_cast<double>(r) * phi0_over_omega / zero_pad_factor);
    for (Eigen::Index j = 0; j < P; ++j) {
      const Eigen::Index p = j - P / 2;
      const std::complex<double> ramp_x =
          std::polar(1.0, 2.0 * kPi * static_cast<double>(p) * f0_over_b / zero_pad_factor);
      out.pixels(i, j) = grid(wrap_index(r, Q), wrap_index(p, P)) * ramp_x * ramp_y * scale;
    }
  }
  out.range_spacing = range_resolution(bandwidth) / zero_pad_factor;
  out.crossrange_spacing = cross_range_resolution(history.centre_frequency(), omega) / zero_pad_factor;
  return out;
}

double range_resolution(double bandwidth_hz)
{
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  return kSpeedOfLight / (2.0 * bandwidth_hz);
}

double cross_range_resolution(double centre_frequency_hz, double integration_angle_rad)
{
  if (!(centre_frequency_hz > 0.0) || !(integration_angle_rad > 0.0))
    throw DomainError("centre frequency and integration angle must be positive");
  return kSpeedOfLight / (2.0 * centre_frequency_hz * integration_angle_rad);
}

IntensityFrame to_intensity(const ComplexFrame& frame, double dynamic_range_db)
{
  if (!(dynamic_range_db > 0.0)) throw DomainError("dynamic range must be positive");
  IntensityFrame out;
  out.range_spacing = frame.range_spacing;
  out.crossrange_spacing = frame.crossrange_spacing;
  out.frame_index = frame.frame_index;
  const ImageD mag = frame.pixels.abs();
  const double peak = mag.size() ? mag.maxCoeff() : 0.0;
  if (!(peak > 0.0)) {
    out.pixels = ImageD::Constant(mag.rows(), mag.cols(), -dynamic_range_db);
    return out;
  }
  out.pixels = (20.0 * (mag / peak).log10()).max(-dynamic_range_db).min(0.0);
  return out;
}

ComplexFrame simulate_frame(const ScattererModel& model, const FrameAperture& aperture,
                            const EncounterConfig& config, Window window, int zero_pad_factor)
{
  const auto projected = project_scatterers(model, aperture);
  const auto f = frequency_axis(config.centre_frequency_hz, config.bandwidth_hz, config.frequency_samples);
  const auto a = angle_axis(deg2rad(config.integration_angle_deg), config.angle_samples_per_frame);
  ComplexFrame frame = form_image(backscatter_field(projected, f, a), window, zero_pad_factor);
  frame.frame_index = aperture.index;
  return frame;
}

} // namespace isarff
