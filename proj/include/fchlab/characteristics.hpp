#pragma once

// Characteristic curves q(t, xi) of the transport field and the Lagrangian
// quantities carried along them.
//
//   dq/dt = v(t, q),   d(q_xi)/dt = v_x(t, q) q_xi,   q(0) = xi, q_xi(0) = 1
//
// v is normally the velocity u; the momentum m can be passed instead to
// compare against the literal m-advection form.  Along u-characteristics
// m(t, q) q_xi^2 = m0(xi).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fchlab/dynamics.hpp"
#include "fchlab/grid_spectral.hpp"
#include "fchlab/time_series.hpp"

namespace fch {

enum class Advection { velocity, momentum };

struct FlowEvent {
  double t = 0.0;
  std::size_t label = 0;
  std::string reason;
};

struct FlowMap {
  std::vector<double> times;
  std::vector<double> labels;
  /// q[i][k] = q(times[i], labels[k])
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> q_xi;
  /// First loss of monotonicity, if any.
  std::vector<FlowEvent> events;

  bool monotone() const { return events.empty(); }
  /// Index of the label xi = 0; throws if absent.
  std::size_t origin_label() const;
};

/// Signed grid coordinates in increasing order (every `stride`-th sample,
/// always including 0).
std::vector<double> grid_labels(const PeriodicGrid& grid, std::size_t stride = 1);

/// RK4 integration of the characteristics of `field` with steps no larger
/// than dt.  Positions are stored at the stamps of the series.
FlowMap flow_map(const TimeSeries& field, std::span<const double> labels, double dt);

/// Time series of u (or m) with exact time derivatives from the run's states.
TimeSeries transport_series(const std::vector<StepState>& trajectory, double a, bool dealias,
                            Advection advection = Advection::velocity);

/// Samples f at arbitrary points; points that fall exactly on a grid node
/// return the stored sample, the rest use the trigonometric interpolant.
std::vector<double> sample_field(const Field& f, std::span<const double> points);

/// |m(t, q) q_xi^2 - m0(xi)| / (||m0||_inf + 1e-300) per stamp and label.
std::vector<std::vector<double>> lagrangian_defects(const FlowMap& flow,
                                                   const std::vector<StepState>& m_traj,
                                                   const Field& m0);
/// Max over labels of lagrangian_defects at each stamp.
std::vector<double> lagrangian_invariant(const FlowMap& flow, const std::vector<StepState>& m_traj,
                                         const Field& m0);

struct SignRow {
  double t = 0.0;
  /// q(t, 0)
  double pivot = 0.0;
  /// min of m on {x >= pivot}
  double min_right = 0.0;
  /// max of m on {x <= pivot}
  double max_left = 0.0;
  double min_all = 0.0;
  double odd_defect = 0.0;
  double scale = 0.0;
};

struct SignReport {
  std::vector<SignRow> rows;

  /// m <= 0 left of the pivot, m >= 0 right of it, and m odd, each within tol * ||m||_inf.
  bool odd_regions_hold(double tol = 1e-8) const;
  /// min m >= -tol * ||m||_inf at every stamp.
  bool nonnegative_holds(double tol = 1e-8) const;
};

/// Regions are taken in the signed coordinate [-L/2, L/2).
SignReport sign_audit(const std::vector<StepState>& m_traj, const FlowMap& flow);

}  // namespace fch
