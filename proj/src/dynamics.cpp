#include "fchlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fchlab/random_field.hpp"

namespace fch {

namespace {

struct RhsResult {
  std::vector<double> values;
  double integral = 0.0;
  double abs_integral = 0.0;
};

RhsResult evaluate_rhs(const PeriodicGrid& grid, std::span<const double> m, double a, bool dealias_on) {
  const std::size_t n = grid.size();
  auto mh = spectral::rfft(grid, m);
  auto uh = mh;
  spectral::helmholtz(grid, uh, -a);
  const auto u = spectral::irfft(grid, uh);
  const auto ux = spectral::irfft(grid, spectral::differentiate(grid, uh, 1));
  const auto mx = spectral::irfft(grid, spectral::differentiate(grid, mh, 1));
  require_finite(u, "velocity u");
  require_finite(ux, "velocity gradient u_x");
  require_finite(mx, "momentum gradient m_x");

  RhsResult out;
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.values[j] = -(u[j] * mx[j] + 2.0 * ux[j] * m[j]);
  if (dealias_on) {
    auto rh = spectral::rfft(grid, out.values);
    spectral::truncate_two_thirds(grid, rh);
    spectral::irfft(grid, rh, out.values);
  }
  require_finite(out.values, "rhs -(u m_x + 2 u_x m)");
  double s = 0.0;
  double sa = 0.0;
  for (double v : out.values) {
    s += v;
    sa += std::abs(v);
  }
  out.integral = s * grid.spacing();
  out.abs_integral = sa * grid.spacing();
  return out;
}

StepState advance(const StepState& state, double dt, const SimConfig& config, double* mean_ratio) {
  const auto& grid = state.m.grid();
  const std::size_t n = grid.size();
  const auto& m = state.m.values();
  std::vector<double> stage(n);

  auto k1 = evaluate_rhs(grid, m, config.a, config.dealias);
  if (mean_ratio) {
    *mean_ratio = k1.abs_integral > 0.0 ? std::abs(k1.integral) / k1.abs_integral : 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) stage[j] = m[j] + 0.5 * dt * k1.values[j];
  auto k2 = evaluate_rhs(grid, stage, config.a, config.dealias);
  for (std::size_t j = 0; j < n; ++j) stage[j] = m[j] + 0.5 * dt * k2.values[j];
  auto k3 = evaluate_rhs(grid, stage, config.a, config.dealias);
  for (std::size_t j = 0; j < n; ++j) stage[j] = m[j] + dt * k3.values[j];
  auto k4 = evaluate_rhs(grid, stage, config.a, config.dealias);

  std::vector<double> next(n);
  for (std::size_t j = 0; j < n; ++j) {
    next[j] = m[j] + dt / 6.0 *
                         (k1.values[j] + 2.0 * k2.values[j] + 2.0 * k3.values[j] + k4.values[j]);
  }
  require_finite(next, "RK4 update");
  return StepState{state.t + dt, Field(grid, std::move(next))};
}

double next_instant(std::size_t count, double every) {
  return static_cast<double>(count + 1) * every;
}

}  // namespace

void SimConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon T must be positive");
  if (!(courant > 0.0 && courant <= 1.0)) throw std::invalid_argument("courant must lie in (0, 1]");
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("blowup_threshold must be positive");
  if (!(snapshot_every > 0.0)) throw std::invalid_argument("snapshot_every must be positive");
  if (!(diagnostics_every > 0.0)) throw std::invalid_argument("diagnostics_every must be positive");
  if (fixed_dt < 0.0) throw std::invalid_argument("dt must be non-negative");
  if (!std::isfinite(a)) throw std::invalid_argument("order a must be finite");
  if (besov) besov->validate();
  (void)grid();
}

Field velocity(const Field& m, double a) { return helmholtz_invert(m, a); }

Field rhs(const Field& m, double a, bool dealias_on) {
  require_finite(m.samples(), "momentum m");
  return Field(m.grid(), evaluate_rhs(m.grid(), m.samples(), a, dealias_on).values);
}

StepState rk4_step(const StepState& state, double dt, const SimConfig& config) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  return advance(state, dt, config, nullptr);
}

double cfl_dt(const StepState& state, const SimConfig& config, double next_output) {
  const double remaining = next_output - state.t;
  double dt = 0.0;
  if (config.fixed_dt > 0.0) {
    dt = config.fixed_dt;
  } else {
    const double umax = velocity(state.m, config.a).max_abs();
    dt = config.courant * state.m.grid().spacing() / std::max(umax, kVelocityFloor);
  }
  return remaining > 0.0 ? std::min(dt, remaining) : dt;
}

std::optional<BlowupEvent> detect_blowup(const StepState& state, double a, double threshold) {
  const auto ux = derivative(velocity(state.m, a), 1);
  std::size_t arg = 0;
  double value = 0.0;
  for (std::size_t j = 0; j < ux.size(); ++j) {
    if (std::abs(ux[j]) > value) {
      value = std::abs(ux[j]);
      arg = j;
    }
  }
  if (value > threshold) {
    return BlowupEvent{state.t, state.m.grid().signed_x(arg), value, "||u_x||_inf exceeded threshold"};
  }
  return std::nullopt;
}

DiagnosticRow compute_diagnostics(double t, const Field& m, double a,
                                  const std::optional<BesovParams>& besov) {
  const auto& grid = m.grid();
  auto mh = spectral::rfft(grid, m.samples());
  auto uh = mh;
  spectral::helmholtz(grid, uh, -a);
  const auto u = spectral::irfft(grid, uh);
  const auto ux = spectral::irfft(grid, spectral::differentiate(grid, uh, 1));

  DiagnosticRow row;
  row.t = t;
  row.l1_m = m.lp_norm(1.0);
  row.int_m = m.integral();
  double e = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) e += u[j] * m[j];
  row.energy_um = e * grid.spacing();
  row.min_m = m.min();
  row.max_m = m.max();
  row.min_ux = *std::min_element(ux.begin(), ux.end());
  row.max_ux = *std::max_element(ux.begin(), ux.end());
  row.odd_defect = fch::odd_defect(m);
  if (besov) row.besov = besov_norm(m, *besov);
  return row;
}

RunReport simulate(const Field& m0, const SimConfig& config) {
  config.validate();
  if (!(m0.grid() == config.grid())) {
    throw std::invalid_argument("simulate: initial field grid does not match configuration");
  }
  require_finite(m0.samples(), "initial momentum m0");

  RunReport report;
  report.config = config;
  StepState state{0.0, config.dealias ? dealias(m0) : m0};

  std::size_t diag_count = 0;
  std::size_t snap_count = 0;
  const double horizon = config.horizon;
  const double eps = 1e-12 * horizon;

  auto record_diag = [&](const StepState& s) {
    report.diagnostics.push_back(compute_diagnostics(s.t, s.m, config.a, config.besov));
    report.trajectory.push_back(s);
  };
  record_diag(state);
  report.snapshots.push_back(state);

  if (auto ev = detect_blowup(state, config.a, config.blowup_threshold)) {
    report.events.push_back(*ev);
    report.final_state = state;
    return report;
  }

  while (state.t < horizon - eps) {
    const double next_diag = std::min(next_instant(diag_count, config.diagnostics_every), horizon);
    const double next_snap = std::min(next_instant(snap_count, config.snapshot_every), horizon);
    const double next_out = std::min(next_diag, next_snap);

    const double dt = cfl_dt(state, config, next_out);
    double ratio = 0.0;
    try {
      state = advance(state, dt, config, &ratio);
    } catch (const NonFiniteError& err) {
      report.events.push_back(BlowupEvent{state.t, std::numeric_limits<double>::quiet_NaN(),
                                          std::numeric_limits<double>::infinity(), err.what()});
      break;
    }
    ++report.steps;
    report.max_rhs_mean_ratio = std::max(report.max_rhs_mean_ratio, ratio);
    if (std::abs(state.t - next_out) <= eps) state.t = next_out;

    bool recorded = false;
    if (state.t >= next_diag - eps) {
      record_diag(state);
      recorded = true;
      while (next_instant(diag_count, config.diagnostics_every) <= state.t + eps) ++diag_count;
    }
    if (state.t >= next_snap - eps) {
      report.snapshots.push_back(state);
      while (next_instant(snap_count, config.snapshot_every) <= state.t + eps) ++snap_count;
    }
    if (auto ev = detect_blowup(state, config.a, config.blowup_threshold)) {
      if (!recorded) record_diag(state);
      report.events.push_back(*ev);
      break;
    }
  }
  report.final_state = state;
  return report;
}

}  // namespace fch
