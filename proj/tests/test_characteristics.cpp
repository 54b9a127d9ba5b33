#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fchlab/characteristics.hpp"
#include "support.hpp"

using namespace fch;

namespace {

SimConfig run_config(double T) {
  SimConfig c;
  c.a = 1.5;
  c.horizon = T;
  c.diagnostics_every = 0.1;
  return c;
}

// Stamps of f(t, x) = e^{-t} shape(x) with exact time derivatives.
TimeSeries decaying_series(const Field& shape, double T, double step) {
  std::vector<double> times;
  std::vector<Field> v, d;
  const int n = static_cast<int>(std::lround(T / step));
  for (int k = 0; k <= n; ++k) {
    const double t = step * k;
    times.push_back(t);
    v.push_back(std::exp(-t) * shape);
    d.push_back(-std::exp(-t) * shape);
  }
  return TimeSeries(times, v, d);
}

TimeSeries steady_series(const Field& f, double T) {
  const Field z(f.grid());
  return TimeSeries({0.0, T / 2, T}, {f, f, f}, {z, z, z});
}

}  // namespace

TEST_CASE("labels are sorted signed coordinates including 0") {
  const PeriodicGrid g(64, 40.0);
  const auto all = grid_labels(g);
  CHECK(all.size() == 64);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(all.front() == -20.0);
  CHECK(std::find(all.begin(), all.end(), 0.0) != all.end());
  const auto some = grid_labels(g, 5);
  CHECK(std::find(some.begin(), some.end(), 0.0) != some.end());
  CHECK(some.size() < all.size());
  CHECK_THROWS_AS(grid_labels(g, 0), std::invalid_argument);
}

TEST_CASE("still fluid: q = xi, q_xi = 1") {
  const PeriodicGrid g(64, 2 * std::numbers::pi);
  const auto labels = grid_labels(g);
  const auto flow = flow_map(steady_series(Field(g), 1.0), labels, 0.1);
  CHECK(flow.monotone());
  for (std::size_t i = 0; i < flow.times.size(); ++i) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      CHECK(flow.q[i][k] == labels[k]);
      CHECK(flow.q_xi[i][k] == 1.0);
    }
  }
}

TEST_CASE("uniform drift: q = xi + c t") {
  const PeriodicGrid g(64, 2 * std::numbers::pi);
  const double c = -0.35;
  const auto labels = grid_labels(g, 4);
  const auto flow = flow_map(steady_series(Field::from_function(g, [&](double) { return c; }), 2.0), labels, 0.05);
  for (std::size_t i = 0; i < flow.times.size(); ++i) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      CHECK(flow.q[i][k] == doctest::Approx(labels[k] + c * flow.times[i]).epsilon(1e-13));
      CHECK(flow.q_xi[i][k] == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("manufactured u = cos(x) e^{-t} against an adaptive ODE reference") {
  using namespace boost::numeric::odeint;
  const PeriodicGrid g(64, 2 * std::numbers::pi);
  const Field shape = Field::from_function(g, [](double x) { return std::cos(x); });
  const TimeSeries series = decaying_series(shape, 1.0, 0.05);
  const std::vector<double> labels{-3.0, -1.2, 0.0, 0.4, 1.5707963267948966, 2.5};
  const auto flow = flow_map(series, labels, 0.005);

  auto stepper = make_controlled(1e-14, 1e-14, runge_kutta_dopri5<std::vector<double>>());
  auto rhs = [](const std::vector<double>& y, std::vector<double>& dy, double t) {
    // y = (q, q_xi)
    dy[0] = std::cos(y[0]) * std::exp(-t);
    dy[1] = -std::sin(y[0]) * std::exp(-t) * y[1];
  };
  double worst = 0.0, worst_xi = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    std::vector<double> y{labels[k], 1.0};
    double t = 0.0;
    for (std::size_t i = 1; i < flow.times.size(); ++i) {
      integrate_adaptive(stepper, rhs, y, t, flow.times[i], 1e-3);
      t = flow.times[i];
      worst = std::max(worst, std::abs(flow.q[i][k] - y[0]));
      worst_xi = std::max(worst_xi, std::abs(flow.q_xi[i][k] - y[1]));
    }
  }
  MESSAGE("max |q - q_ref| = " << worst << ", max |q_xi - ref| = " << worst_xi);
  CHECK(worst <= 1e-8);
  CHECK(worst_xi <= 1e-8);
}

TEST_CASE("on-node sampling returns stored values") {
  const PeriodicGrid g(32, 40.0);
  fch::test::Rng rng(61);
  const Field f = fch::test::smooth_field(g, rng, 8, 10);
  std::vector<double> pts;
  for (std::size_t j = 0; j < g.size(); ++j) pts.push_back(g.signed_x(j));
  const auto v = sample_field(f, pts);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(v[j] == f[j]);
  const std::vector<double> off{0.3};
  CHECK(sample_field(f, off)[0] == doctest::Approx(interpolate(f, off)[0]).epsilon(1e-14));
}

TEST_CASE("zero momentum: zero defect and trivial sign audit") {
  const SimConfig cfg = run_config(0.5);
  const auto run = simulate(Field(cfg.grid()), cfg);
  const auto flow = flow_map(transport_series(run.trajectory, cfg.a, cfg.dealias), grid_labels(cfg.grid(), 8), 0.05);
  for (double d : lagrangian_invariant(flow, run.trajectory, run.trajectory.front().m)) CHECK(d == 0.0);
  const auto sign = sign_audit(run.trajectory, flow);
  CHECK(sign.odd_regions_hold());
  CHECK(sign.nonnegative_holds());
}

TEST_CASE("Gaussian momentum: Lagrangian identity, positivity, monotone flow") {
  const SimConfig cfg = run_config(2.0);
  const Field m0 = Field::from_function(cfg.grid(), [](double x) { return std::exp(-x * x); });
  const auto run = simulate(m0, cfg);
  REQUIRE_FALSE(run.blew_up());
  const auto flow = flow_map(transport_series(run.trajectory, cfg.a, cfg.dealias), grid_labels(cfg.grid()), 0.05);
  CHECK(flow.monotone());
  const auto defect = lagrangian_invariant(flow, run.trajectory, run.trajectory.front().m);
  CHECK(defect.front() == 0.0);
  const double worst = *std::max_element(defect.begin(), defect.end());
  MESSAGE("Lagrangian defect " << worst);
  CHECK(worst <= 1e-4);
  CHECK(sign_audit(run.trajectory, flow).nonnegative_holds(1e-8));

  // Literal m-advection is a different flow.
  const std::vector<double> few{-1.0, 0.0, 1.0};
  const auto uflow = flow_map(transport_series(run.trajectory, cfg.a, cfg.dealias), few, 0.05);
  const auto mflow =
      flow_map(transport_series(run.trajectory, cfg.a, cfg.dealias, Advection::momentum), few, 0.05);
  CHECK(std::abs(mflow.q.back()[2] - uflow.q.back()[2]) > 1e-3);
}

TEST_CASE("odd momentum: odd flow map and signed half-regions") {
  const SimConfig cfg = run_config(2.0);
  const Field m0 = Field::from_function(cfg.grid(), [](double x) { return x * std::exp(-x * x); });
  const auto run = simulate(m0, cfg);
  const auto labels = grid_labels(cfg.grid());
  const auto flow = flow_map(transport_series(run.trajectory, cfg.a, cfg.dealias), labels, 0.05);
  CHECK(flow.monotone());
  double worst = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto it = std::find(labels.begin(), labels.end(), -labels[k]);
    if (it == labels.end()) continue;
    const auto kk = static_cast<std::size_t>(it - labels.begin());
    for (std::size_t i = 0; i < flow.times.size(); ++i) worst = std::max(worst, std::abs(flow.q[i][k] + flow.q[i][kk]));
  }
  CHECK(worst <= 1e-8);
  const auto sign = sign_audit(run.trajectory, flow);
  CHECK(sign.odd_regions_hold(1e-8));
  for (const auto& row : sign.rows) CHECK(std::abs(row.pivot) <= 1e-12);
}

TEST_CASE("mismatched stamps are rejected") {
  const SimConfig cfg = run_config(0.3);
  const Field m0 = Field::from_function(cfg.grid(), [](double x) { return std::exp(-x * x); });
  const auto run = simulate(m0, cfg);
  const auto flow = flow_map(transport_series(run.trajectory, cfg.a, cfg.dealias), grid_labels(cfg.grid(), 8), 0.05);
  std::vector<StepState> shorter(run.trajectory.begin(), run.trajectory.end() - 1);
  CHECK_THROWS_AS(lagrangian_invariant(flow, shorter, m0), std::invalid_argument);
  CHECK_THROWS_AS(sign_audit(shorter, flow), std::invalid_argument);
  CHECK_THROWS_AS(flow_map(transport_series(run.trajectory, cfg.a, cfg.dealias), grid_labels(cfg.grid()), 0.0),
                  std::invalid_argument);
}
