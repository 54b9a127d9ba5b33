#pragma once

// Named experiments: initial data, default configuration and the checks run
// after the simulation.
//
//   thm13_positive  m0 = 0.5 exp(-x^2) >= 0, a = 1.5, T = 5
//   thm14_odd       m0 = x exp(-x^2), odd, negative left / positive right, a = 1.5, T = 3
//   peakon_a1       filtered periodic peakon, a = 1, c = 1, N = 1024, T = 2
//   breaking_a1     m0 = -A x exp(-x^2), a = 1, T = 4, repeated at a = 2
//   picard_demo     u0 = 0.2 exp(-x^2), a = 1.5, successive approximation up to T = 1

#include <optional>
#include <string>
#include <vector>

#include "fchlab/characteristics.hpp"
#include "fchlab/config.hpp"
#include "fchlab/dynamics.hpp"
#include "fchlab/invariants_audit.hpp"
#include "fchlab/picard.hpp"

namespace fch {

const std::vector<std::string>& preset_names();

/// Default configuration of a preset; throws std::invalid_argument listing
/// the available names when unknown.
RunConfig preset_config(const std::string& name);

/// Initial momentum generated by config.sim.preset on the config's grid.
Field preset_initial_momentum(const SimConfig& config);

/// Velocity of the filtered periodic peakon with crest height c at x = 0.
Field filtered_peakon(const PeriodicGrid& grid, double c);

struct PeakonFit {
  /// Shift s maximising the continuous cross-correlation of u(T) with u(0).
  double shift = 0.0;
  double speed = 0.0;
  /// ||u(T, . + s) - u(0)||_L2 / ||u(0)||_L2
  double shape_error = 0.0;
};

PeakonFit fit_translation(const Field& u0, const Field& ut, double elapsed);

struct PipelineOptions {
  /// Step of the characteristic integration; 0 means diagnostics_every / 2.
  double flow_dt = 0.0;
  std::size_t label_stride = 1;
};

struct PipelineResult {
  RunConfig config;
  Field m0;
  RunReport run;
  std::vector<Verdict> verdicts;
  std::optional<FlowMap> flow;
  std::vector<double> lagrangian;
  std::optional<SignReport> sign;
  /// breaking_a1: the same data at a = 2.
  std::optional<RunReport> contrast;
  std::optional<PicardResult> picard;
  std::optional<PeakonFit> peakon;
  bool expects_blowup = false;

  bool audits_passed() const;
  /// A blow-up event the preset did not ask for.
  bool unexpected_blowup() const { return run.blew_up() && !expects_blowup; }
};

/// simulate -> audits -> characteristics, as selected by config.sim.preset.
PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options = {});
PipelineResult run_preset(const std::string& name, const PipelineOptions& options = {});

/// Characteristics and Lagrangian defect of a finished run.
void attach_characteristics(PipelineResult& result, const PipelineOptions& options,
                            Advection advection = Advection::velocity);

/// ||u^n(T) - u(T)||_inf between the last Picard iterate and the simulated velocity.
double picard_gap(const PicardResult& picard, const RunReport& run, double a);

}  // namespace fch
