#pragma once

#include <optional>

#include "fchlab/grid_spectral.hpp"
#include "fchlab/littlewood_paley.hpp"

namespace fch {

struct DiagnosticRow {
  double t = 0.0;
  double l1_m = 0.0;
  double int_m = 0.0;
  /// int u m dx
  double energy_um = 0.0;
  double min_m = 0.0;
  double max_m = 0.0;
  double min_ux = 0.0;
  double max_ux = 0.0;
  /// max_j |m(x_j) + m(-x_j)|
  double odd_defect = 0.0;
  std::optional<double> besov;
};

DiagnosticRow compute_diagnostics(double t, const Field& m, double a,
                                  const std::optional<BesovParams>& besov = std::nullopt);

}  // namespace fch
