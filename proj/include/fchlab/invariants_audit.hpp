#pragma once

// Post-processing audits over finished runs, and the two-run perturbation
// probe for continuous dependence on the data.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fchlab/dynamics.hpp"
#include "fchlab/littlewood_paley.hpp"
#include "fchlab/random_field.hpp"

namespace fch {

struct Verdict {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string notice;
  /// Extra measured values, reported verbatim.
  std::map<std::string, double> details;
};

/// Relative drift of ||m||_{L^1} when m0 has one sign (up to round-off);
/// otherwise the drift of int m relative to ||m0||_{L^1}, with a notice.
Verdict audit_l1(const RunReport& run);

/// max_t ||u_x||_inf <= sup|G_a'| * ||m0||_{L^1} * (1 + 1e-6).  a <= 1 throws.
Verdict audit_ux_bound(const RunReport& run, double a);

/// |int m(t) - int m0| <= 1e-10 * ||m0||_{L^1} at every diagnostic instant.
Verdict audit_mean(const RunReport& run);

/// Relative drift of int u m.
Verdict audit_energy(const RunReport& run, double tolerance = 1e-6);

/// Weak norm used by the probe: B^{-1/2}_{2,inf}.
inline constexpr BesovParams kProbeNorm{-0.5, 2.0, std::numeric_limits<double>::infinity()};

struct ProbeOptions {
  std::uint64_t seed = 7;
  /// Parity of the perturbations; by default that of u0 when u0 is even or odd.
  std::optional<Parity> parity;
  /// Cyclic shift (in samples) applied to u0 and to every perturbation.
  long shift = 0;
  /// Fixed perturbation direction instead of random fields (every trial uses it).
  std::optional<Field> direction;
  RandomFieldSpec field{};
};

struct ProbeTrial {
  double amplification_besov = 0.0;
  double amplification_l2 = 0.0;
  double w0_besov = 0.0;
  double w0_l2 = 0.0;
  /// sup_t ||w(t)|| in the weak Besov norm
  double w_sup_besov = 0.0;
};

struct ProbeReport {
  double eps = 0.0;
  std::vector<ProbeTrial> trials;
  /// Max over trials of sup_t ||w(t)|| / ||w(0)||.
  double amplification_besov = 0.0;
  double amplification_l2 = 0.0;
  bool aborted = false;
  std::string notice;
};

/// w = u_perturbed - u_base with u0 + eps * p, ||p||_{L^2} = ||u0||_{L^2}.
/// The time step is frozen from the base data so both runs share one time grid.
ProbeReport continuous_dependence_probe(const Field& u0, double eps, const SimConfig& config,
                                        int trials, const ProbeOptions& options = {});

/// Probe at eps and eps / 10; passes when both amplifications are finite and
/// their ratio lies in [1/3, 3].
Verdict two_scale_probe(const Field& u0, double eps, const SimConfig& config, int trials,
                        const ProbeOptions& options = {});

}  // namespace fch
