#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fchlab/kernel.hpp"
#include "support.hpp"

using namespace fch;

namespace {

// Line kernel of (1 - d_xx)^{-a} in closed form:
//   G_a(x) = c_a |x|^nu K_nu(|x|),  nu = a - 1/2,  c_a = 2^{1/2 - a} / (sqrt(pi) Gamma(a))
// and, from (x^nu K_nu)' = -x^nu K_{nu-1}, G_a'(x) = -c_a x^nu K_{nu-1}(x) for x > 0.
double bessel_const(double a) {
  return std::pow(2.0, 0.5 - a) / (std::sqrt(std::numbers::pi) * std::tgamma(a));
}
double bessel_kernel(double a, double x) {
  const double nu = a - 0.5;
  const double r = std::abs(x);
  return bessel_const(a) * std::pow(r, nu) * std::cyl_bessel_k(std::abs(nu), r);
}
double bessel_kernel_derivative(double a, double x) {
  const double nu = a - 0.5;
  return -bessel_const(a) * std::pow(x, nu) * std::cyl_bessel_k(std::abs(nu - 1.0), x);
}
double bessel_derivative_sup(double a) {
  double best = 0.0, best_x = 0.0;
  for (double x = 0.01; x < 30.0; x += 0.01) {
    const double v = std::abs(bessel_kernel_derivative(a, x));
    if (v > best) best = v, best_x = x;
  }
  auto f = [&](double x) { return -std::abs(bessel_kernel_derivative(a, x)); };
  const auto r = boost::math::tools::brent_find_minima(f, best_x - 0.01, best_x + 0.01, 50);
  return -r.second;
}

}  // namespace

TEST_CASE("a = 1 line kernel is exp(-|x|)/2") {
  CHECK(green_kernel(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  for (double x : {0.05, 0.5, 1.0, 3.0, 8.0}) {
    CHECK(green_kernel(1.0, x) == doctest::Approx(0.5 * std::exp(-x)).epsilon(1e-10));
  }
}

TEST_CASE("a = 1/2 line kernel is K0/pi") {
  for (double x : {0.01, 0.1, 0.7, 2.0, 6.0}) {
    CHECK(green_kernel(0.5, x) == doctest::Approx(std::cyl_bessel_k(0.0, x) / std::numbers::pi).epsilon(1e-10));
  }
  CHECK_THROWS_AS(green_kernel(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(green_kernel(0.3, 0.0), std::domain_error);
  CHECK_THROWS_AS(green_kernel(0.0, 1.0), std::domain_error);
}

TEST_CASE("kernel and derivative against the Bessel closed form") {
  for (double a : {0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0}) {
    for (double x : {0.02, 0.3, 1.0, 2.5, 6.0, 12.0}) {
      const auto kv = green_kernel_with_derivative(a, x);
      CHECK(kv.value == doctest::Approx(bessel_kernel(a, x)).epsilon(1e-9));
      CHECK(kv.derivative == doctest::Approx(bessel_kernel_derivative(a, x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("kernel is exactly even") {
  for (double a : {0.75, 1.5, 2.0}) {
    for (double x : {0.1, 1.3, 7.0}) {
      CHECK(green_kernel(a, x) - green_kernel(a, -x) == 0.0);
      QuadSpec per;
      per.period = 40.0;
      CHECK(green_kernel(a, x, per) - green_kernel(a, -x, per) == 0.0);
    }
  }
  const PeriodicGrid g(128, 40.0);
  const Field k = kernel_field(g, 1.5);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(k[j] == k[g.reflect(j)]);
}

TEST_CASE("periodized kernel at large period matches the line kernel") {
  QuadSpec per;
  per.period = 40.0;
  for (double a : {1.0, 1.5, 2.0}) {
    for (double x : {0.5, 2.0, 5.0}) {
      CHECK(green_kernel(a, x, per) == doctest::Approx(bessel_kernel(a, x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("starved quadrature raises QuadratureError") {
  QuadSpec q;
  q.initial_step = 2.0;
  q.tolerance = 1e-300;
  q.max_refinements = 1;
  CHECK_THROWS_AS(green_kernel(1.5, 1.0, q), QuadratureError);
}

TEST_CASE("derivative sup: closed form at a = 2, Bessel oracle elsewhere") {
  // a = 2: G_2(x) = (1 + |x|) e^{-|x|} / 4, so |G_2'| = x e^{-x} / 4 peaks at e^{-1} / 4.
  const auto two = kernel_derivative_sup_detail(2.0);
  CHECK(two.value == doctest::Approx(std::exp(-1.0) / 4.0).epsilon(1e-9));
  CHECK(two.argmax == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(two.refinement_change < 1e-6);

  const auto one_half = kernel_derivative_sup_detail(1.5);
  CHECK(one_half.refinement_change < 1e-6);
  CHECK(one_half.value == doctest::Approx(bessel_derivative_sup(1.5)).epsilon(1e-8));
  CHECK(kernel_derivative_sup(2.5) == doctest::Approx(bessel_derivative_sup(2.5)).epsilon(1e-8));

  CHECK(kernel_derivative_sup(3.0) <= one_half.value);
  CHECK_THROWS_AS(kernel_derivative_sup(1.0), std::domain_error);
  CHECK_THROWS_AS(kernel_derivative_sup(0.8), std::domain_error);
}

TEST_CASE("kernel symbol reproduces (1 + k^2)^{-a}") {
  const PeriodicGrid g(128, 40.0);
  for (double a : {1.0, 1.5}) {
    const auto sym = kernel_symbol(g, a);
    for (std::size_t n = 0; n < sym.size(); ++n) {
      const double k = spectral::half_wavenumber(g, n);
      CHECK(sym[n] == doctest::Approx(std::pow(1.0 + k * k, -a)).epsilon(1e-8));
    }
  }
}

TEST_CASE("convolution agrees with the multiplier inverse") {
  const PeriodicGrid g(128, 40.0);
  fch::test::Rng rng(4);
  const Field f = fch::test::smooth_field(g, rng, 8, 20);
  for (double a : {0.75, 1.5}) {
    CHECK(fch::test::rel_diff(kernel_convolve(f, a), helmholtz_invert(f, a)) < 1e-7);
  }
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  double s0 = 0, s10 = 0, s11 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s10 += w[i] * std::pow(x[i], 10);
    s11 += w[i] * std::pow(x[i], 11);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s10 == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
  CHECK(std::abs(s11) < 1e-15);
}
