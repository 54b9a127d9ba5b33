#pragma once

// Pseudo-spectral evolution of the momentum form
//
//   m_t + u m_x + 2 u_x m = 0,   u = (1 - d_xx)^{-a} m
//
// with classical RK4 in time and optional 2/3-rule dealiasing.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fchlab/diagnostics.hpp"
#include "fchlab/grid_spectral.hpp"
#include "fchlab/littlewood_paley.hpp"

namespace fch {

struct SimConfig {
  double a = 1.5;
  double length = 40.0;
  std::size_t n = 512;
  double horizon = 5.0;
  double courant = 0.5;
  /// Positive value selects a fixed step instead of the CFL policy.
  double fixed_dt = 0.0;
  bool dealias = true;
  double blowup_threshold = 1e3;
  double snapshot_every = 0.5;
  double diagnostics_every = 0.05;
  std::string preset = "thm13_positive";
  std::uint64_t seed = 1;
  std::optional<BesovParams> besov;

  void validate() const;
  PeriodicGrid grid() const { return PeriodicGrid(n, length); }
};

struct StepState {
  double t = 0.0;
  Field m;
};

struct BlowupEvent {
  double t = 0.0;
  double x = 0.0;
  double value = 0.0;
  std::string reason;
};

struct RunReport {
  SimConfig config;
  std::vector<DiagnosticRow> diagnostics;
  std::vector<BlowupEvent> events;
  /// States at every diagnostic instant, starting with t = 0.
  std::vector<StepState> trajectory;
  /// States at every snapshot instant, starting with t = 0.
  std::vector<StepState> snapshots;
  std::optional<StepState> final_state;
  std::size_t steps = 0;
  /// max over steps of |int rhs dx| / int |rhs| dx
  double max_rhs_mean_ratio = 0.0;

  bool blew_up() const { return !events.empty(); }
  const StepState& last_state() const { return final_state.value(); }
};

/// Velocity u = (1 - d_xx)^{-a} m.
Field velocity(const Field& m, double a);

/// -(u m_x + 2 u_x m); throws NonFiniteError naming the offending term.
Field rhs(const Field& m, double a, bool dealias);

/// One classical RK4 step.  Non-finite stages throw NonFiniteError.
StepState rk4_step(const StepState& state, double dt, const SimConfig& config);

/// Courant * dx / max(||u||_inf, floor), capped at next_output - t.
double cfl_dt(const StepState& state, const SimConfig& config, double next_output);

inline constexpr double kVelocityFloor = 1e-8;

std::optional<BlowupEvent> detect_blowup(const StepState& state, double a, double threshold);

RunReport simulate(const Field& m0, const SimConfig& config);

}  // namespace fch
