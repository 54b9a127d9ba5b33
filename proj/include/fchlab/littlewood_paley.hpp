#pragma once

// Dyadic (Littlewood-Paley) decomposition on the periodic grid.
//
// chi(xi) = psi(|xi|), psi = 1 on [0, 3/4], 0 on [4/3, inf), C^inf glue in
// between; phi(xi) = chi(xi/2) - chi(xi).  Block j >= 0 multiplies the
// spectrum by phi(2^-j k), block -1 by chi(k).

#include <limits>
#include <span>
#include <vector>

#include "fchlab/grid_spectral.hpp"

namespace fch {

struct BesovParams {
  double s = 0.0;
  double p = 2.0;
  double r = 2.0;

  /// Throws std::invalid_argument unless p, r >= 1 (infinity allowed).
  void validate() const;
};

/// Low-frequency cutoff chi evaluated at xi.
double lp_chi(double xi);
/// Annular cutoff phi(xi) = chi(xi/2) - chi(xi).
double lp_phi(double xi);

class DyadicPartition {
 public:
  explicit DyadicPartition(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const { return grid_; }
  int jmax() const { return jmax_; }
  /// Cutoff of block j (-1 <= j <= jmax) on the half-spectrum slots.
  std::span<const double> block_symbol(int j) const;

 private:
  PeriodicGrid grid_;
  int jmax_;
  std::vector<std::vector<double>> symbols_;
};

DyadicPartition build_partition(const PeriodicGrid& grid);

Field block(const Field& f, int j, const DyadicPartition& partition);
/// All blocks j = -1..jmax from one transform; element i holds block i - 1.
std::vector<Field> blocks(const Field& f, const DyadicPartition& partition);

/// S_n f = sum_{j < n} Delta_j f.
Field low_freq_truncate(const Field& f, int n, const DyadicPartition& partition);

struct BesovTable {
  std::vector<int> index;
  /// 2^{js} ||Delta_j f||_{L^p}
  std::vector<double> weighted;
  double norm = 0.0;
};

BesovTable besov_table(const Field& f, const BesovParams& params, const DyadicPartition& partition);
double besov_norm(const Field& f, const BesovParams& params, const DyadicPartition& partition);
double besov_norm(const Field& f, const BesovParams& params);

/// Bony paraproduct T_u v = sum_j S_{j-1} u * Delta_j v.
Field paraproduct(const Field& u, const Field& v, const DyadicPartition& partition);
/// Bony remainder R(u, v) = sum_{|j - j'| <= 1} Delta_j u * Delta_j' v.
Field remainder(const Field& u, const Field& v, const DyadicPartition& partition);

}  // namespace fch
