#include "fchlab/kernel.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fch {

namespace {

constexpr double kTailRatio = 1e-20;

// Integrand of the subordination integral after s = exp(tau), for both G and
// G'.  x is already reduced to [0, L/2] when a period is set.
class SubordinationIntegrand {
 public:
  SubordinationIntegrand(double a, double x, double period) : a_(a), x_(x) {
    prefactor_ = 1.0 / (std::sqrt(4.0 * std::numbers::pi) * std::tgamma(a));
    if (std::isfinite(period)) {
      // Images beyond |x + nL| > sqrt(320 s_max) contribute below e^{-80}.
      const double reach = std::sqrt(320.0 * 200.0);
      const int m = static_cast<int>(std::ceil((reach + period) / period));
      offsets_.push_back(0.0);
      for (int n = 1; n <= m; ++n) {
        offsets_.push_back(n * period);
        offsets_.push_back(-n * period);
      }
    } else {
      offsets_.push_back(0.0);
    }
  }

  KernelValue operator()(double tau) const {
    double unused;
    return (*this)(tau, unused);
  }

  /// Also returns the sum of |image contributions| to G', the scale against
  /// which its quadrature error is judged (images cancel near x = L/2).
  KernelValue operator()(double tau, double& derivative_scale) const {
    const double s = std::exp(tau);
    const double base = (a_ - 0.5) * tau - s;
    double v = 0.0;
    double d = 0.0;
    double d_abs = 0.0;
    for (double off : offsets_) {
      const double dist = x_ + off;
      const double e = std::exp(base - dist * dist / (4.0 * s));
      v += e;
      d -= dist / (2.0 * s) * e;
      d_abs += std::abs(dist) / (2.0 * s) * e;
    }
    derivative_scale = prefactor_ * d_abs;
    return {prefactor_ * v, prefactor_ * d};
  }

 private:
  double a_;
  double x_;
  double prefactor_;
  std::vector<double> offsets_;
};

double magnitude(const KernelValue& g) { return std::abs(g.value) + std::abs(g.derivative); }

// Move an endpoint outward until the integrand is negligible against the
// largest value seen.
double extend_endpoint(const SubordinationIntegrand& g, double tau, double direction, double& peak) {
  double prev = magnitude(g(tau));
  peak = std::max(peak, prev);
  for (int iter = 0; iter < 2000; ++iter) {
    const double next_tau = tau + direction;
    const double cur = magnitude(g(next_tau));
    peak = std::max(peak, cur);
    tau = next_tau;
    if (cur <= kTailRatio * peak && cur <= prev) return tau;
    prev = cur;
  }
  throw QuadratureError(prev, peak);
}

KernelValue integrate(double a, double x, const QuadSpec& quad) {
  if (!(a > 0.0)) throw std::domain_error("kernel order a must be positive");
  double xr = x;
  if (std::isfinite(quad.period)) {
    xr = std::remainder(x, quad.period);
  }
  xr = std::abs(xr);
  if (xr == 0.0 && a <= 0.5) {
    throw std::domain_error("kernel is singular at the origin for a <= 1/2");
  }
  const SubordinationIntegrand g(a, xr, quad.period);

  const double s_lo = xr > 0.0 ? std::min(1e-2, xr * xr / 280.0) : 1e-6;
  const double start_lo = std::log(s_lo);
  const double start_hi = std::log(80.0 + 4.0 * a);
  double peak = 0.0;
  for (double tau = start_lo; tau <= start_hi; tau += 0.5) peak = std::max(peak, magnitude(g(tau)));
  const double tau_lo = extend_endpoint(g, start_lo, -1.0, peak);
  const double tau_hi = extend_endpoint(g, start_hi, 1.0, peak);

  const auto intervals = static_cast<long>(std::ceil((tau_hi - tau_lo) / quad.initial_step));
  double h = (tau_hi - tau_lo) / static_cast<double>(intervals);

  KernelValue sum{0.0, 0.0};
  KernelValue abs_sum{0.0, 0.0};
  auto accumulate = [&](double tau, double w) {
    double d_scale = 0.0;
    const auto v = g(tau, d_scale);
    sum.value += w * v.value;
    sum.derivative += w * v.derivative;
    abs_sum.value += w * std::abs(v.value);
    abs_sum.derivative += w * d_scale;
  };
  accumulate(tau_lo, 0.5);
  accumulate(tau_hi, 0.5);
  for (long i = 1; i < intervals; ++i) accumulate(tau_lo + static_cast<double>(i) * h, 1.0);
  KernelValue estimate{h * sum.value, h * sum.derivative};

  long points = intervals;
  for (int r = 0; r < quad.max_refinements; ++r) {
    for (long i = 0; i < points; ++i) {
      accumulate(tau_lo + (static_cast<double>(i) + 0.5) * h, 1.0);
    }
    points *= 2;
    h *= 0.5;
    const KernelValue refined{h * sum.value, h * sum.derivative};
    const bool value_ok =
        std::abs(refined.value - estimate.value) <= quad.tolerance * h * abs_sum.value;
    const bool deriv_ok = std::abs(refined.derivative - estimate.derivative) <=
                          quad.tolerance * h * abs_sum.derivative;
    if (value_ok && deriv_ok) return refined;
    if (r + 1 == quad.max_refinements) {
      if (!value_ok) throw QuadratureError(estimate.value, refined.value);
      throw QuadratureError(estimate.derivative, refined.derivative);
    }
    estimate = refined;
  }
  return estimate;
}

struct SupScan {
  double value;
  double argmax;
};

SupScan scan_derivative_sup(double a, double period, double dx, const QuadSpec& quad) {
  const double x_max = std::isfinite(period) ? std::min(0.5 * period, 40.0) : 40.0;
  auto neg_abs = [&](double x) { return -std::abs(integrate(a, x, quad).derivative); };
  double best = 0.0;
  double best_x = dx;
  for (double x = dx; x <= x_max; x += dx) {
    const double v = -neg_abs(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double lo = std::max(0.5 * dx, best_x - dx);
  const double hi = std::min(x_max, best_x + dx);
  const auto res = boost::math::tools::brent_find_minima(neg_abs, lo, hi, 40);
  if (-res.second > best) return {-res.second, res.first};
  return {best, best_x};
}

}  // namespace

QuadratureError::QuadratureError(double coarse, double fine)
    : std::runtime_error("subordination quadrature did not converge: estimates " +
                         std::to_string(coarse) + " and " + std::to_string(fine)),
      coarse_(coarse),
      fine_(fine) {}

KernelValue green_kernel_with_derivative(double a, double x, const QuadSpec& quad) {
  auto v = integrate(a, x, quad);
  double xr = std::isfinite(quad.period) ? std::remainder(x, quad.period) : x;
  if (xr < 0.0) v.derivative = -v.derivative;
  return v;
}

double green_kernel(double a, double x, const QuadSpec& quad) {
  return integrate(a, x, quad).value;
}

Field kernel_field(const PeriodicGrid& grid, double a, QuadSpec quad) {
  quad.period = grid.length();
  std::vector<double> v(grid.size());
  // Evaluate once per |x| so the sampled kernel is exactly even.
  for (std::size_t j = 0; j <= grid.size() / 2; ++j) {
    v[j] = integrate(a, grid.x(j), quad).value;
  }
  for (std::size_t j = grid.size() / 2 + 1; j < grid.size(); ++j) v[j] = v[grid.reflect(j)];
  return Field(grid, std::move(v));
}

KernelSup kernel_derivative_sup_detail(double a, double period) {
  if (!(a > 1.0)) {
    throw std::domain_error("kernel derivative sup requires a > 1, got " + std::to_string(a));
  }
  QuadSpec coarse;
  coarse.period = period;
  QuadSpec fine = coarse;
  fine.initial_step = 0.25;
  fine.tolerance = 1e-14;
  const auto first = scan_derivative_sup(a, period, 0.01, coarse);
  const auto second = scan_derivative_sup(a, period, 0.005, fine);
  return {second.value, second.argmax, std::abs(second.value - first.value) / second.value};
}

double kernel_derivative_sup(double a, double period) {
  return kernel_derivative_sup_detail(a, period).value;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -z;
    nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

std::vector<double> kernel_symbol(const PeriodicGrid& grid, double a, ConvolutionSpec spec) {
  spec.quad.period = grid.length();
  std::vector<double> gl_x;
  std::vector<double> gl_w;
  gauss_legendre(spec.nodes_per_panel, gl_x, gl_w);

  // y = t^2 removes the |y|^{2a-1} behaviour of the kernel at the origin.
  const double t_max = std::sqrt(0.5 * grid.length());
  const double width = t_max / spec.panels;
  std::vector<double> ys;
  std::vector<double> ws;
  for (int p = 0; p < spec.panels; ++p) {
    const double t0 = p * width;
    for (std::size_t q = 0; q < gl_x.size(); ++q) {
      const double t = t0 + 0.5 * width * (gl_x[q] + 1.0);
      const double y = t * t;
      ys.push_back(y);
      ws.push_back(0.5 * width * gl_w[q] * 2.0 * t * 2.0 * integrate(a, y, spec.quad).value);
    }
  }
  std::vector<double> symbol(grid.half_size());
  for (std::size_t n = 0; n < symbol.size(); ++n) {
    const double k = spectral::half_wavenumber(grid, n);
    double s = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) s += ws[i] * std::cos(k * ys[i]);
    symbol[n] = s;
  }
  return symbol;
}

Field kernel_convolve(const Field& f, double a, const ConvolutionSpec& spec) {
  const auto symbol = kernel_symbol(f.grid(), a, spec);
  auto c = spectral::rfft(f.grid(), f.samples());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= symbol[n];
  return Field(f.grid(), spectral::irfft(f.grid(), c));
}

}  // namespace fch
