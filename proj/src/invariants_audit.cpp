#include "fchlab/invariants_audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fchlab/kernel.hpp"

namespace fch {

namespace {

const Field& initial_momentum(const RunReport& run) {
  if (run.trajectory.empty()) throw std::invalid_argument("audit: run has no recorded states");
  return run.trajectory.front().m;
}

Parity detect_parity(const Field& f) {
  const double tol = 1e-12 * std::max(f.max_abs(), 1e-300);
  if (f.max_abs() == 0.0) return Parity::none;
  if (odd_defect(f) <= tol) return Parity::odd;
  if (even_defect(f) <= tol) return Parity::even;
  return Parity::none;
}

}  // namespace

Verdict audit_l1(const RunReport& run) {
  const Field& m0 = initial_momentum(run);
  const double scale = m0.max_abs();
  // Dealiasing leaves round-off of either sign where m0 underflows.
  const double noise = 1e-12 * scale;
  const bool one_signed = m0.min() >= -noise || m0.max() <= noise;
  const double l1_0 = run.diagnostics.front().l1_m;

  Verdict v;
  v.name = "l1_conservation";
  if (l1_0 == 0.0) {
    double worst = 0.0;
    for (const auto& row : run.diagnostics) worst = std::max(worst, row.l1_m);
    v.measured = worst;
    v.tolerance = 0.0;
    v.passed = worst == 0.0;
    v.notice = "zero initial momentum";
    return v;
  }
  double l1_drift = 0.0;
  double mean_drift = 0.0;
  for (const auto& row : run.diagnostics) {
    l1_drift = std::max(l1_drift, std::abs(row.l1_m - l1_0) / l1_0);
    mean_drift = std::max(mean_drift, std::abs(row.int_m - run.diagnostics.front().int_m) / l1_0);
  }
  v.details["l1_relative_drift"] = l1_drift;
  v.details["int_m_relative_drift"] = mean_drift;
  if (one_signed) {
    v.measured = l1_drift;
    v.tolerance = 1e-6;
  } else {
    v.name = "int_m_conservation";
    v.measured = mean_drift;
    v.tolerance = 1e-10;
    v.notice = "m0 changes sign; auditing int m instead of ||m||_L1";
  }
  v.passed = v.measured <= v.tolerance;
  return v;
}

Verdict audit_ux_bound(const RunReport& run, double a) {
  if (!(a > 1.0)) throw std::domain_error("u_x bound audit requires a > 1");
  const Field& m0 = initial_momentum(run);
  const double l1 = m0.lp_norm(1.0);
  double ux = 0.0;
  double l1_max = 0.0;
  for (const auto& row : run.diagnostics) {
    ux = std::max({ux, std::abs(row.min_ux), std::abs(row.max_ux)});
    l1_max = std::max(l1_max, row.l1_m);
  }
  Verdict v;
  v.name = "ux_bound";
  v.measured = ux;
  if (l1 == 0.0) {
    v.tolerance = 0.0;
    v.passed = ux <= 0.0;
    v.notice = "zero initial momentum";
    return v;
  }
  const double constant = kernel_derivative_sup(a);
  v.tolerance = constant * l1 * (1.0 + 1e-6);
  v.passed = ux <= v.tolerance;
  v.details["kernel_derivative_sup"] = constant;
  v.details["m0_l1"] = l1;
  v.details["max_l1_m"] = l1_max;
  v.details["slack"] = v.tolerance - ux;
  return v;
}

Verdict audit_mean(const RunReport& run) {
  const Field& m0 = initial_momentum(run);
  const double l1 = m0.lp_norm(1.0);
  double drift = 0.0;
  for (const auto& row : run.diagnostics) {
    drift = std::max(drift, std::abs(row.int_m - run.diagnostics.front().int_m));
  }
  Verdict v;
  v.name = "int_m_conservation";
  v.measured = l1 > 0.0 ? drift / l1 : drift;
  v.tolerance = 1e-10;
  v.passed = v.measured <= v.tolerance;
  v.details["max_rhs_mean_ratio"] = run.max_rhs_mean_ratio;
  return v;
}

Verdict audit_energy(const RunReport& run, double tolerance) {
  const double e0 = run.diagnostics.front().energy_um;
  double drift = 0.0;
  for (const auto& row : run.diagnostics) drift = std::max(drift, std::abs(row.energy_um - e0));
  Verdict v;
  v.name = "energy_um_drift";
  v.measured = e0 != 0.0 ? drift / std::abs(e0) : drift;
  v.tolerance = tolerance;
  v.passed = v.measured <= v.tolerance;
  return v;
}

ProbeReport continuous_dependence_probe(const Field& u0_in, double eps, const SimConfig& config,
                                        int trials, const ProbeOptions& options) {
  if (trials < 1) throw std::invalid_argument("probe needs at least one trial");
  if (!(eps >= 0.0)) throw std::invalid_argument("probe eps must be non-negative");
  const auto& grid = u0_in.grid();
  const DyadicPartition partition(grid);
  const Parity parity = options.parity.value_or(detect_parity(u0_in));

  SimConfig cfg = config;
  if (cfg.fixed_dt <= 0.0) {
    cfg.fixed_dt = cfg.courant * grid.spacing() / std::max(1.25 * u0_in.max_abs(), kVelocityFloor);
  }

  ProbeReport report;
  report.eps = eps;
  const Field u0 = shift_samples(u0_in, options.shift);
  const RunReport base = simulate(helmholtz_apply(u0, cfg.a), cfg);
  if (base.blew_up()) {
    report.aborted = true;
    report.notice = "base run blew up at t = " + std::to_string(base.events.front().t);
    return report;
  }
  std::vector<Field> base_u;
  for (const auto& s : base.trajectory) base_u.push_back(velocity(s.m, cfg.a));

  SplitMix64 rng(options.seed);
  RandomFieldSpec spec = options.field;
  spec.parity = parity;
  const double u0_l2 = u0.l2_norm();
  for (int trial = 0; trial < trials; ++trial) {
    Field p = options.direction ? *options.direction : random_smooth_field(grid, rng, spec);
    p = shift_samples(p, options.shift);
    const double pn = p.l2_norm();
    if (pn > 0.0) p *= (u0_l2 > 0.0 ? u0_l2 : 1.0) / pn;

    ProbeTrial rec;
    if (eps == 0.0) {
      report.trials.push_back(rec);
      continue;
    }
    const RunReport pert = simulate(helmholtz_apply(u0 + eps * p, cfg.a), cfg);
    if (pert.blew_up() || pert.trajectory.size() != base.trajectory.size()) {
      report.aborted = true;
      report.notice = "perturbed run blew up in trial " + std::to_string(trial);
      return report;
    }
    for (std::size_t i = 0; i < pert.trajectory.size(); ++i) {
      const Field w = velocity(pert.trajectory[i].m, cfg.a) - base_u[i];
      const double wb = besov_norm(w, kProbeNorm, partition);
      const double wl = w.l2_norm();
      if (i == 0) {
        rec.w0_besov = wb;
        rec.w0_l2 = wl;
      }
      rec.w_sup_besov = std::max(rec.w_sup_besov, wb);
      if (rec.w0_besov > 0.0) rec.amplification_besov = std::max(rec.amplification_besov, wb / rec.w0_besov);
      if (rec.w0_l2 > 0.0) rec.amplification_l2 = std::max(rec.amplification_l2, wl / rec.w0_l2);
    }
    report.amplification_besov = std::max(report.amplification_besov, rec.amplification_besov);
    report.amplification_l2 = std::max(report.amplification_l2, rec.amplification_l2);
    report.trials.push_back(rec);
  }
  if (eps == 0.0) report.notice = "eps = 0: perturbation vanishes identically";
  return report;
}

Verdict two_scale_probe(const Field& u0, double eps, const SimConfig& config, int trials,
                        const ProbeOptions& options) {
  const auto coarse = continuous_dependence_probe(u0, eps, config, trials, options);
  const auto fine = continuous_dependence_probe(u0, eps / 10.0, config, trials, options);
  Verdict v;
  v.name = "continuous_dependence";
  v.details["eps"] = eps;
  v.details["amplification_besov"] = coarse.amplification_besov;
  v.details["amplification_besov_eps_over_10"] = fine.amplification_besov;
  v.details["amplification_l2"] = coarse.amplification_l2;
  v.details["amplification_l2_eps_over_10"] = fine.amplification_l2;
  v.tolerance = 3.0;
  if (coarse.aborted || fine.aborted) {
    v.notice = coarse.aborted ? coarse.notice : fine.notice;
    v.passed = false;
    return v;
  }
  const bool finite = std::isfinite(coarse.amplification_besov) && std::isfinite(fine.amplification_besov) &&
                      std::isfinite(coarse.amplification_l2) && std::isfinite(fine.amplification_l2);
  const double ratio = fine.amplification_besov > 0.0
                           ? coarse.amplification_besov / fine.amplification_besov
                           : std::numeric_limits<double>::infinity();
  v.measured = ratio;
  v.passed = finite && ratio >= 1.0 / 3.0 && ratio <= 3.0;
  return v;
}

}  // namespace fch
