#include "doctest.h"

#include <random>

#include "isarff/edges.hpp"
#include "synthetic.hpp"

using namespace isarff;

namespace {

// Replicate-boundary exponential mean of x[0..n-1] written as an explicit weighted sum.
double causal_oracle(const Eigen::ArrayXd& x, double b, Eigen::Index n)
{
  if (n == 0) return x[0];
  const Eigen::Index last = n - 1;
  double acc = std::pow(b, static_cast<double>(last)) * x[0];
  for (Eigen::Index k = 1; k <= last; ++k) acc += (1.0 - b) * std::pow(b, static_cast<double>(last - k)) * x[k];
  return acc;
}

ImageD vertical_step(Eigen::Index rows, Eigen::Index cols, Eigen::Index step_col, double ratio)
{
  ImageD a = ImageD::Ones(rows, cols);
  a.rightCols(cols - step_col) = ratio;
  return a;
}

} // namespace

TEST_CASE("one-sided means match the explicit weighted sums")
{
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  Eigen::ArrayXd x(25);
  for (auto& v : x) v = u(rng);
  for (double b : {0.2, 0.73, 0.95}) {
    Eigen::ArrayXd causal, anticausal;
    one_sided_means(x, b, causal, anticausal);
    const Eigen::ArrayXd rev = x.reverse();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      CHECK(causal[i] == doctest::Approx(causal_oracle(x, b, i)).epsilon(1e-12));
      CHECK(anticausal[i] == doctest::Approx(causal_oracle(rev, b, x.size() - 1 - i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant image has zero gradient")
{
  const auto g = roewa_gradients(ImageD::Constant(12, 9, 3.3), 0.73);
  CHECK((g.gx.abs() < 1e-15).all());
  CHECK((g.gy.abs() < 1e-15).all());
}

TEST_CASE("vertical step peaks at the step with value log r")
{
  const double r = 4.0;
  for (double b : {0.5, 0.73, 0.9, 0.99}) {
    const auto g = roewa_gradients(vertical_step(16, 32, 14, r), b);
    Eigen::Index row = 0, col = 0;
    g.gx.abs().maxCoeff(&row, &col);
    CHECK((col == 14 || col == 13));
    // The one-sided means on either side of the step are exactly 1 and r.
    CHECK(g.gx(8, 14) == doctest::Approx(std::log(r)).epsilon(1e-12));
    CHECK(g.gx(8, 13) == doctest::Approx(std::log(r)).epsilon(1e-12));
    CHECK(g.gx.abs().maxCoeff() == doctest::Approx(std::log(r)).epsilon(1e-12));
    CHECK((g.gy.abs() < 1e-12).all());
    // Away from the step the response decays with b.
    CHECK(std::abs(g.gx(8, 20)) < std::log(r) * std::pow(b, 5.0) + 1e-12);
  }
}

TEST_CASE("transposing the image swaps the components")
{
  std::mt19937_64 rng(8);
  const ImageD a = synth::step_image(20, 30, {{2.0, 35.0, 3.0}}) * synth::speckle(20, 30, 4.0, rng);
  const auto g = roewa_gradients(a, 0.73);
  const ImageD at = a.transpose();
  const auto gt = roewa_gradients(at, 0.73);
  CHECK((gt.gx == ImageD(g.gy.transpose())).all());
  CHECK((gt.gy == ImageD(g.gx.transpose())).all());
}

TEST_CASE("gradients are invariant to global amplitude scaling")
{
  std::mt19937_64 rng(9);
  const ImageD a = synth::step_image(24, 24, {{-3.0, 120.0, 5.0}}) * synth::speckle(24, 24, 2.0, rng);
  const auto g = roewa_gradients(a, 0.73);
  const auto g4 = roewa_gradients(ImageD(4.0 * a), 0.73);
  CHECK((g4.gx == g.gx).all());
  CHECK((g4.gy == g.gy).all());
  const auto g37 = roewa_gradients(ImageD(3.7 * a), 0.73);
  CHECK(((g37.gx - g.gx).abs() < 1e-12).all());
  CHECK(((g37.gy - g.gy).abs() < 1e-12).all());
}

TEST_CASE("ROEWA preconditions")
{
  ImageD a = ImageD::Ones(5, 5);
  CHECK_THROWS_AS(roewa_gradients(a, 0.0), DomainError);
  CHECK_THROWS_AS(roewa_gradients(a, 1.0), DomainError);
  a(2, 2) = 0.0;
  CHECK_THROWS_AS(roewa_gradients(a, 0.5), DomainError);
}

TEST_CASE("dB frames gain a positive floor")
{
  IntensityFrame f;
  f.pixels = ImageD::Constant(3, 3, -40.0);
  f.pixels(1, 1) = 0.0;
  const ImageD a = to_amplitude(f);
  CHECK(a(1, 1) == doctest::Approx(1.0 + 1e-6));
  CHECK(a(0, 0) == doctest::Approx(0.01 + 1e-6));
  CHECK(a.minCoeff() > 0.0);
}

TEST_CASE("magnitude and direction conventions")
{
  ImageD gx(1, 5), gy(1, 5);
  gx << 3, 1, -1, 0, 0;
  gy << 4, 0, 0, 0, -2;
  const auto md = gradient_magnitude_direction(gx, gy);
  CHECK(md.magnitude(0, 0) == doctest::Approx(5.0));
  CHECK(md.direction(0, 1) == 0.0);
  CHECK(md.direction(0, 2) == doctest::Approx(kPi));
  CHECK(md.direction(0, 3) == 0.0);
  CHECK(md.magnitude(0, 3) == 0.0);
  CHECK(md.direction(0, 4) == doctest::Approx(-kPi / 2));
  CHECK_THROWS_AS(gradient_magnitude_direction(gx, ImageD::Zero(2, 5)), ShapeMismatchError);

  // -pi maps onto +pi so the range is (-pi, pi].
  ImageD nx(1, 1), ny(1, 1);
  nx << -1.0;
  ny << -0.0;
  CHECK(gradient_magnitude_direction(nx, ny).direction(0, 0) == doctest::Approx(kPi));
}

TEST_CASE("rising and falling edges point in opposite directions")
{
  const auto rise = compute_gradient_field(synth::to_db(vertical_step(20, 40, 20, 5.0)));
  const auto fall = compute_gradient_field(synth::to_db(vertical_step(20, 40, 20, 0.2)));
  CHECK(rise.direction(10, 20) == doctest::Approx(0.0));
  CHECK(fall.direction(10, 20) == doctest::Approx(kPi));
  CHECK(rise.mask(10, 20) == 1);
}

TEST_CASE("significance mask of a bimodal magnitude is the high block")
{
  ImageD g = ImageD::Constant(20, 20, 0.1);
  g.block(5, 5, 8, 8) = 0.9;
  const Mask m = significance_mask(g, 12);
  CHECK(m.block(5, 5, 8, 8).cast<int>().sum() == 64);
  CHECK(m.cast<int>().sum() == 64);
}

TEST_CASE("significance mask edge cases")
{
  ImageD g = ImageD::Zero(10, 10);
  CHECK(significance_mask(g, 12).cast<int>().sum() == 0);
  g(4, 4) = 1.0;
  CHECK(significance_mask(g, 5).cast<int>().sum() == 0);
  g(4, 4) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(significance_mask(g, 5), DomainError);

  std::mt19937_64 rng(12);
  const ImageD a = synth::step_image(40, 40, {{0, 45, 3}, {8, -60, 2}}) * synth::speckle(40, 40, 3, rng);
  const auto md = gradient_magnitude_direction(roewa_gradients(a, 0.73).gx, roewa_gradients(a, 0.73).gy);
  for (int area = 1; area < 30; area += 4) {
    const Mask lo = significance_mask(md.magnitude, area), hi = significance_mask(md.magnitude, area + 4);
    CHECK(((hi.cast<int>() - lo.cast<int>()) <= 0).all());
  }
}

TEST_CASE("gradient field grids share the frame shape")
{
  std::mt19937_64 rng(1);
  const auto f = synth::speckled_steps(30, 44, {{3, 10, 4}}, 4, rng);
  const auto field = compute_gradient_field(f);
  for (const ImageD* g : {&field.gx, &field.gy, &field.magnitude, &field.direction}) {
    CHECK(g->rows() == 30);
    CHECK(g->cols() == 44);
  }
  CHECK(((field.magnitude - (field.gx.square() + field.gy.square()).sqrt()).abs() < 1e-15).all());
  CHECK((field.magnitude >= 0).all());
  CHECK((field.direction > -kPi).all());
  CHECK((field.direction <= kPi).all());
}
