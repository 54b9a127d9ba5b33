#include "fchlab/presets.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fch {

namespace {

constexpr double kSignTol = 1e-8;
constexpr double kLagrangianTol = 1e-4;
constexpr double kPeakonSpeedTol = 0.01;
constexpr double kPicardTailTol = 0.7;
constexpr double kPicardGapTol = 1e-4;

// Breaking data: ||u_x||_inf starts at 0.91.  At N = 512 the a = 1 slope
// saturates near 3-4 (grid scale), while the a = 2 run stays below 0.45.
constexpr double kBreakingAmplitude = 4.0;
constexpr double kBreakingThreshold = 2.5;
constexpr double kPicardAmplitude = 0.2;
// Unit-height data compresses past what N = 512 resolves by t = 4; half height stays resolved to T = 5.
constexpr double kPositiveAmplitude = 0.5;

Verdict check(std::string name, double measured, double tolerance, bool passed, std::string notice = {}) {
  Verdict v;
  v.name = std::move(name);
  v.measured = measured;
  v.tolerance = tolerance;
  v.passed = passed;
  v.notice = std::move(notice);
  return v;
}

double max_ux(const RunReport& run) {
  double v = 0.0;
  for (const auto& row : run.diagnostics) v = std::max({v, std::abs(row.min_ux), std::abs(row.max_ux)});
  return v;
}

Verdict sign_nonnegative(const RunReport& run) {
  double worst = 0.0;
  for (const auto& row : run.diagnostics) {
    const double scale = std::max(std::abs(row.min_m), std::abs(row.max_m));
    if (scale > 0.0) worst = std::max(worst, -row.min_m / scale);
  }
  return check("sign_nonnegative", worst, kSignTol, worst <= kSignTol);
}

Verdict odd_parity(const RunReport& run) {
  double worst = 0.0;
  for (const auto& row : run.diagnostics) {
    const double scale = std::max(std::abs(row.min_m), std::abs(row.max_m));
    if (scale > 0.0) worst = std::max(worst, row.odd_defect / scale);
  }
  return check("odd_parity", worst, kSignTol, worst <= kSignTol);
}

Verdict no_blowup(const RunReport& run) {
  return check("no_blowup", run.blew_up() ? run.events.front().t : run.config.horizon, run.config.horizon,
               !run.blew_up(), run.blew_up() ? run.events.front().reason : "");
}

Field gaussian(const PeriodicGrid& grid, double amplitude) {
  return Field::from_function(grid, [amplitude](double x) { return amplitude * std::exp(-x * x); });
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"thm13_positive", "thm14_odd", "peakon_a1", "breaking_a1",
                                                 "picard_demo"};
  return names;
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.sim.preset = name;
  if (name == "thm13_positive") {
    cfg.sim.a = 1.5;
    cfg.sim.horizon = 5.0;
  } else if (name == "thm14_odd") {
    cfg.sim.a = 1.5;
    cfg.sim.horizon = 3.0;
  } else if (name == "peakon_a1") {
    cfg.sim.a = 1.0;
    cfg.sim.n = 1024;
    cfg.sim.horizon = 2.0;
  } else if (name == "breaking_a1") {
    cfg.sim.a = 1.0;
    cfg.sim.horizon = 4.0;
    cfg.sim.blowup_threshold = kBreakingThreshold;
  } else if (name == "picard_demo") {
    cfg.sim.a = 1.5;
    cfg.sim.horizon = 1.0;
    cfg.picard.a = 1.5;
    cfg.picard.horizon = 1.0;
  } else {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + name + "'; available: " + list);
  }
  cfg.picard.a = cfg.sim.a;
  cfg.picard.length = cfg.sim.length;
  cfg.picard.n = cfg.sim.n;
  return cfg;
}

Field filtered_peakon(const PeriodicGrid& grid, double c) {
  // Line peakon e^{-|x|} has transform 2 / (1 + k^2); the periodic one has
  // coefficients 2 / (L (1 + k^2)).  A raised-cosine taper from k_max / 3 to
  // 2 k_max / 3 removes the slowly decaying tail.
  const double k2 = 2.0 * grid.max_wavenumber() / 3.0;
  const double k1 = 0.5 * k2;
  spectral::HalfSpectrum c_hat(grid.half_size());
  for (std::size_t n = 0; n < c_hat.size(); ++n) {
    const double k = std::abs(spectral::half_wavenumber(grid, n));
    double taper = 1.0;
    if (k >= k2) {
      taper = 0.0;
    } else if (k > k1) {
      taper = 0.5 * (1.0 + std::cos(std::numbers::pi * (k - k1) / (k2 - k1)));
    }
    c_hat[n] = Complex(taper * 2.0 / (grid.length() * (1.0 + k * k)), 0.0);
  }
  Field u(grid, spectral::irfft(grid, c_hat));
  u *= c / u[0];
  return u;
}

PeakonFit fit_translation(const Field& u0, const Field& ut, double elapsed) {
  require_same_grid(u0, ut, "fit_translation");
  const auto& grid = u0.grid();
  const auto a = spectral::rfft(grid, u0.samples());
  const auto b = spectral::rfft(grid, ut.samples());
  const std::size_t nyq = grid.size() / 2;
  // corr(s) = sum_n b_n conj(a_n) e^{i k_n s} ~ int ut(x) u0(x - s) dx
  spectral::HalfSpectrum cross(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) cross[n] = b[n] * std::conj(a[n]);
  cross[nyq] = Complex(0.0, 0.0);
  const auto corr = spectral::irfft(grid, cross);
  const auto best = static_cast<std::size_t>(std::max_element(corr.begin(), corr.end()) - corr.begin());
  const double h = grid.spacing();
  const double s0 = grid.signed_x(best);
  auto neg = [&](double s) {
    double v = 0.0;
    spectral::evaluate(grid, cross, std::span<const double>(&s, 1), std::span<double>(&v, 1));
    return -v;
  };
  const auto res = boost::math::tools::brent_find_minima(neg, s0 - h, s0 + h, 50);

  PeakonFit fit;
  fit.shift = res.first;
  // Brent locates a flat maximum only to ~sqrt(eps); polish on corr'(s) = 0.
  auto slope = [&](double s) {
    double v = 0.0;
    double d = 0.0;
    spectral::evaluate(grid, cross, std::span<const double>(&s, 1), std::span<double>(&v, 1),
                       std::span<double>(&d, 1));
    return d;
  };
  const double lo = res.first - 0.25 * h;
  const double hi = res.first + 0.25 * h;
  if (slope(lo) > 0.0 && slope(hi) < 0.0) {
    std::uintmax_t iters = 100;
    const auto root = boost::math::tools::toms748_solve(slope, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    fit.shift = 0.5 * (root.first + root.second);
  }
  fit.speed = elapsed > 0.0 ? fit.shift / elapsed : 0.0;
  // Evaluate u(T) at x + s on the grid points.
  std::vector<double> pts(grid.size());
  for (std::size_t j = 0; j < pts.size(); ++j) pts[j] = grid.x(j) + fit.shift;
  const auto back = interpolate(ut, pts);
  double err = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) err += (back[j] - u0[j]) * (back[j] - u0[j]);
  fit.shape_error = std::sqrt(err * h) / std::max(u0.l2_norm(), 1e-300);
  return fit;
}

Field preset_initial_momentum(const SimConfig& config) {
  const auto grid = config.grid();
  const std::string& name = config.preset;
  if (name == "thm13_positive") return gaussian(grid, kPositiveAmplitude);
  if (name == "thm14_odd") {
    return Field::from_function(grid, [](double x) { return x * std::exp(-x * x); });
  }
  if (name == "peakon_a1") return helmholtz_apply(filtered_peakon(grid, 1.0), config.a);
  if (name == "breaking_a1") {
    return Field::from_function(grid, [](double x) { return -kBreakingAmplitude * x * std::exp(-x * x); });
  }
  if (name == "picard_demo") return helmholtz_apply(gaussian(grid, kPicardAmplitude), config.a);
  (void)preset_config(name);  // throws with the list of names
  throw std::invalid_argument("unknown preset " + name);
}

bool PipelineResult::audits_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

void attach_characteristics(PipelineResult& result, const PipelineOptions& options, Advection advection) {
  const auto& sim = result.run.config;
  const double dt = options.flow_dt > 0.0 ? options.flow_dt : 0.5 * sim.diagnostics_every;
  const auto series = transport_series(result.run.trajectory, sim.a, sim.dealias, advection);
  const auto labels = grid_labels(sim.grid(), options.label_stride);
  result.flow = flow_map(series, labels, dt);
  result.lagrangian = lagrangian_invariant(*result.flow, result.run.trajectory, result.run.trajectory.front().m);
  result.sign = sign_audit(result.run.trajectory, *result.flow);
}

double picard_gap(const PicardResult& picard, const RunReport& run, double a) {
  const Field u_sim = velocity(run.last_state().m, a);
  return (picard.final_state() - u_sim).max_abs();
}

PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options) {
  const std::string& name = config.sim.preset;
  (void)preset_config(name);
  PipelineResult result{config, preset_initial_momentum(config.sim), RunReport{}, {}, {}, {}, {}, {}, {}, {}, false};
  result.expects_blowup = name == "breaking_a1";
  result.run = simulate(result.m0, config.sim);
  const auto& run = result.run;
  const double a = config.sim.a;

  if (name == "thm13_positive" || name == "thm14_odd") {
    result.verdicts.push_back(no_blowup(run));
    result.verdicts.push_back(audit_l1(run));
    if (result.verdicts.back().name != "int_m_conservation") result.verdicts.push_back(audit_mean(run));
    if (a > 1.0) result.verdicts.push_back(audit_ux_bound(run, a));
    if (!run.blew_up()) {
      attach_characteristics(result, options);
      const double defect = *std::max_element(result.lagrangian.begin(), result.lagrangian.end());
      result.verdicts.push_back(check("lagrangian_identity", defect, kLagrangianTol, defect <= kLagrangianTol));
      result.verdicts.push_back(check("flow_monotone", result.flow->events.empty() ? 0.0 : result.flow->events[0].t,
                                      0.0, result.flow->monotone()));
    }
    if (name == "thm13_positive") {
      result.verdicts.push_back(sign_nonnegative(run));
    } else {
      result.verdicts.push_back(odd_parity(run));
      if (result.sign) {
        double worst = 0.0;
        for (const auto& row : result.sign->rows) {
          if (row.scale > 0.0) {
            worst = std::max({worst, -row.min_right / row.scale, row.max_left / row.scale,
                              row.odd_defect / row.scale});
          }
        }
        result.verdicts.push_back(
            check("sign_regions", worst, kSignTol, result.sign->odd_regions_hold(kSignTol)));
      }
    }
  } else if (name == "peakon_a1") {
    result.verdicts.push_back(no_blowup(run));
    result.verdicts.push_back(audit_mean(run));
    if (!run.blew_up()) {
      const auto& last = run.last_state();
      result.peakon = fit_translation(velocity(run.trajectory.front().m, a), velocity(last.m, a), last.t);
      const double err = std::abs(result.peakon->speed - 1.0);
      auto v = check("peakon_speed", result.peakon->speed, kPeakonSpeedTol, err <= kPeakonSpeedTol);
      v.details["shape_error_l2"] = result.peakon->shape_error;
      v.details["shift"] = result.peakon->shift;
      result.verdicts.push_back(v);
    }
  } else if (name == "breaking_a1") {
    const bool broke = run.blew_up() && run.events.front().t < config.sim.horizon;
    result.verdicts.push_back(check("breaking_event", broke ? run.events.front().t : config.sim.horizon,
                                    config.sim.horizon, broke));
    SimConfig smooth = config.sim;
    smooth.a = 2.0;
    result.contrast = simulate(preset_initial_momentum(smooth), smooth);
    const double ux = max_ux(*result.contrast);
    result.verdicts.push_back(check("contrast_a2_bounded", ux, smooth.blowup_threshold,
                                    !result.contrast->blew_up() && ux < smooth.blowup_threshold));
  } else if (name == "picard_demo") {
    result.verdicts.push_back(no_blowup(run));
    PicardConfig pc = config.picard;
    pc.a = a;
    pc.length = config.sim.length;
    pc.n = config.sim.n;
    const Field u0 = gaussian(config.sim.grid(), kPicardAmplitude);
    result.picard = iterate(u0, pc);
    const auto& pr = *result.picard;
    result.verdicts.push_back(check("picard_tail_ratio", pr.tail_ratio, kPicardTailTol,
                                    pr.geometric && pr.tail_ratio <= kPicardTailTol, pr.notice));
    auto within = check("picard_window", pc.horizon, pr.existence_window, pc.horizon < pr.existence_window);
    within.details["fitted_constant"] = pr.fitted_constant;
    result.verdicts.push_back(within);
    if (!run.blew_up()) {
      const double gap = picard_gap(pr, run, a);
      result.verdicts.push_back(check("picard_vs_simulation", gap, kPicardGapTol, gap <= kPicardGapTol));
    }
  }
  return result;
}

PipelineResult run_preset(const std::string& name, const PipelineOptions& options) {
  return run_pipeline(preset_config(name), options);
}

}  // namespace fch
