#include <cmath>

#include "doctest.h"
#include "fchlab/invariants_audit.hpp"
#include "fchlab/kernel.hpp"
#include "support.hpp"

using namespace fch;

namespace {

SimConfig cfg_for(double a, double T, std::size_t n = 512) {
  SimConfig c;
  c.a = a;
  c.n = n;
  c.horizon = T;
  c.diagnostics_every = 0.1;
  return c;
}

Field gauss(const PeriodicGrid& g, double amp) {
  return Field::from_function(g, [&](double x) { return amp * std::exp(-x * x); });
}
Field odd_bump(const PeriodicGrid& g, double amp) {
  return Field::from_function(g, [&](double x) { return amp * x * std::exp(-x * x); });
}

}  // namespace

TEST_CASE("zero momentum passes every audit with zero measurements") {
  const SimConfig cfg = cfg_for(1.5, 0.5, 128);
  const auto run = simulate(Field(cfg.grid()), cfg);
  const auto l1 = audit_l1(run);
  CHECK(l1.passed);
  CHECK(l1.measured == 0.0);
  const auto ux = audit_ux_bound(run, cfg.a);
  CHECK(ux.passed);
  CHECK(ux.measured == 0.0);
  CHECK(ux.tolerance == 0.0);
  CHECK(audit_mean(run).passed);
  CHECK(audit_energy(run).passed);
}

TEST_CASE("nonnegative Gaussian: L1 conserved, u_x bound with slack") {
  const SimConfig cfg = cfg_for(1.5, 2.0);
  const auto run = simulate(gauss(cfg.grid(), 0.5), cfg);
  const auto l1 = audit_l1(run);
  CHECK(l1.name == "l1_conservation");
  CHECK(l1.passed);
  CHECK(l1.measured <= 1e-6);
  const auto ux = audit_ux_bound(run, cfg.a);
  CHECK(ux.passed);
  CHECK(ux.details.at("slack") > 0.0);
  CHECK(ux.details.at("kernel_derivative_sup") == doctest::Approx(kernel_derivative_sup(1.5)));
  CHECK(audit_mean(run).passed);
  const auto e = audit_energy(run);
  CHECK(e.passed);
  MESSAGE("l1 drift " << l1.measured << ", u_x " << ux.measured << " <= " << ux.tolerance << ", energy drift "
                      << e.measured);
}

TEST_CASE("sign-indefinite data audits int m and reports the L1 drift") {
  const SimConfig cfg = cfg_for(1.5, 2.0);
  const auto run = simulate(odd_bump(cfg.grid(), 1.0), cfg);
  const auto v = audit_l1(run);
  CHECK(v.name == "int_m_conservation");
  CHECK(v.passed);
  CHECK_FALSE(v.notice.empty());
  CHECK(v.details.count("l1_relative_drift") == 1);
}

TEST_CASE("u_x bound at a = 2 on odd data; a <= 1 is refused") {
  const SimConfig cfg = cfg_for(2.0, 2.0);
  const auto run = simulate(odd_bump(cfg.grid(), 1.0), cfg);
  CHECK(audit_ux_bound(run, 2.0).passed);
  CHECK_THROWS_AS(audit_ux_bound(run, 1.0), std::domain_error);
  CHECK_THROWS_AS(audit_ux_bound(run, 0.5), std::domain_error);
}

TEST_CASE("probe at eps = 0 sees no difference") {
  const SimConfig cfg = cfg_for(1.5, 0.3, 128);
  const Field u0 = gauss(cfg.grid(), 1.0);
  const auto rep = continuous_dependence_probe(u0, 0.0, cfg, 2);
  CHECK_FALSE(rep.aborted);
  REQUIRE(rep.trials.size() == 2);
  for (const auto& t : rep.trials) {
    CHECK(t.w0_l2 == 0.0);
    CHECK(t.w_sup_besov == 0.0);
  }
  CHECK_FALSE(rep.notice.empty());
  CHECK_THROWS_AS(continuous_dependence_probe(u0, -1.0, cfg, 1), std::invalid_argument);
  CHECK_THROWS_AS(continuous_dependence_probe(u0, 1e-4, cfg, 0), std::invalid_argument);
}

TEST_CASE("probe amplification is translation invariant") {
  const SimConfig cfg = cfg_for(1.5, 0.5, 256);
  const Field u0 = Field::from_function(cfg.grid(), [](double x) { return std::exp(-x * x); });
  ProbeOptions base;
  base.parity = Parity::none;
  ProbeOptions moved = base;
  moved.shift = 37;
  const auto a = continuous_dependence_probe(u0, 1e-4, cfg, 2, base);
  const auto b = continuous_dependence_probe(u0, 1e-4, cfg, 2, moved);
  REQUIRE_FALSE(a.aborted);
  CHECK(std::isfinite(a.amplification_besov));
  CHECK(b.amplification_besov == doctest::Approx(a.amplification_besov).epsilon(1e-8));
  CHECK(b.amplification_l2 == doctest::Approx(a.amplification_l2).epsilon(1e-8));
}

TEST_CASE("perturbation along u0 stays in the two-scale bracket") {
  const SimConfig cfg = cfg_for(1.5, 1.0, 256);
  const Field u0 = Field::from_function(cfg.grid(), [](double x) { return std::exp(-x * x); });
  ProbeOptions opt;
  opt.direction = u0;
  const auto v = two_scale_probe(u0, 1e-4, cfg, 1, opt);
  MESSAGE("aligned ratio " << v.measured << ", A " << v.details.at("amplification_besov"));
  CHECK(v.passed);
  CHECK(v.measured >= 1.0 / 3.0);
  CHECK(v.measured <= 3.0);
}

TEST_CASE("same seed, same directions") {
  const SimConfig cfg = cfg_for(1.5, 0.2, 128);
  const Field u0 = gauss(cfg.grid(), 1.0);
  const auto a = continuous_dependence_probe(u0, 1e-5, cfg, 2);
  const auto b = continuous_dependence_probe(u0, 1e-5, cfg, 2);
  CHECK(a.amplification_besov == b.amplification_besov);
  CHECK(a.amplification_l2 == b.amplification_l2);
}
