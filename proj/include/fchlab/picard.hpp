#pragma once

// Successive approximation by linear transport problems:
//
//   u^{n+1}_t + u^n u^{n+1}_x = F(u^n),   u^{n+1}(0) = S_{n+1} u_0,   u^0 = 0
//
// with source F(u) = -[L, u d_x] m - 2 L(u_x m), L = (1 - d_xx)^{-a},
// m = (1 - d_xx)^a u.  With this sign -u u_x + F(u) = L(-(u m_x + 2 u_x m)),
// i.e. the fixed point solves the momentum equation.

#include <string>
#include <vector>

#include "fchlab/grid_spectral.hpp"
#include "fchlab/littlewood_paley.hpp"
#include "fchlab/time_series.hpp"

namespace fch {

struct PicardConfig {
  double a = 1.5;
  double length = 40.0;
  std::size_t n = 512;
  double horizon = 1.0;
  int iterations = 12;
  double dt = 0.01;
  BesovParams norm{1.5, 2.0, 1.0};
  /// Successive differences below tolerance * sup-norm are treated as converged.
  double tolerance = 1e-12;

  void validate() const;
  PeriodicGrid grid() const { return PeriodicGrid(n, length); }
};

/// Commutator [L, u d_x] m = L(u m_x) - u u_x.
Field commutator(const Field& u, double a);
/// Same commutator through the paraproduct splitting
///   [L, T_u d_x] m + L T_{m_x} u - T_{u_x} u + L R(u, m_x) - R(u, u_x).
Field commutator_bony(const Field& u, double a, const DyadicPartition& partition);

/// F(u) = -[L, u d_x] m - 2 L(u_x m).
Field source_term(const Field& u, double a);
/// dF/dt given u and u_t (F is quadratic in u).
Field source_term_rate(const Field& u, const Field& ut, double a);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> values;
  std::vector<Field> rates;
};

/// RK4 for u_t + A u_x = S with A, S interpolated in time.  Output stamps are
/// uniform with spacing horizon / ceil(horizon / dt).
Trajectory linear_transport_solve(const TimeSeries& advector, const TimeSeries& source,
                                  const Field& init, double dt, double horizon);

struct IterateRecord {
  int n = 0;
  Trajectory trajectory;
  /// sup_t ||u^n(t)|| in the configured Besov norm
  double sup_norm = 0.0;
  /// sup_t ||u^n - u^{n-1}||, zero for n = 0
  double difference = 0.0;
};

struct PicardResult {
  std::vector<IterateRecord> iterates;
  /// d_n = sup_t ||u^{n+1} - u^n|| for n = 0..
  std::vector<double> differences;
  /// d_{n+1} / d_n
  std::vector<double> ratios;
  double tail_ratio = 0.0;
  bool geometric = false;
  bool diverged = false;
  std::string notice;
  /// Empirical constant of the uniform bound C||u0|| / (1 - C t ||u0||^2).
  double fitted_constant = 0.0;
  double initial_norm = 0.0;
  /// 1 / (C ||u0||^2) with the fitted C.
  double existence_window = 0.0;

  const Field& final_state() const { return iterates.back().trajectory.values.back(); }
};

PicardResult iterate(const Field& u0, const PicardConfig& config);

}  // namespace fch
