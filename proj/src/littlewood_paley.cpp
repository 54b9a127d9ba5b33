#include "fchlab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fch {

namespace {

double smooth_step_factor(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Partial sums of blocks in physical space: partial[i] = sum_{j' < i - 1} Delta_j'.
std::vector<Field> low_sums(const std::vector<Field>& b) {
  std::vector<Field> partial;
  partial.reserve(b.size() + 1);
  partial.emplace_back(b.front().grid());
  for (const auto& blk : b) partial.push_back(partial.back() + blk);
  return partial;
}

}  // namespace

void BesovParams::validate() const {
  if (!(p >= 1.0) || !(r >= 1.0)) {
    throw std::invalid_argument("Besov parameters need p >= 1 and r >= 1");
  }
  if (!std::isfinite(s)) throw std::invalid_argument("Besov regularity index must be finite");
}

double lp_chi(double xi) {
  const double r = std::abs(xi);
  constexpr double inner = 3.0 / 4.0;
  constexpr double outer = 4.0 / 3.0;
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  const double t = (outer - r) / (outer - inner);
  const double e0 = smooth_step_factor(t);
  const double e1 = smooth_step_factor(1.0 - t);
  return e0 / (e0 + e1);
}

double lp_phi(double xi) { return lp_chi(0.5 * xi) - lp_chi(xi); }

DyadicPartition::DyadicPartition(const PeriodicGrid& grid) : grid_(grid) {
  jmax_ = std::max(0, static_cast<int>(std::ceil(std::log2(grid.max_wavenumber()))) + 1);
  symbols_.resize(static_cast<std::size_t>(jmax_ + 2));
  for (int j = -1; j <= jmax_; ++j) {
    auto& sym = symbols_[static_cast<std::size_t>(j + 1)];
    sym.resize(grid.half_size());
    for (std::size_t n = 0; n < sym.size(); ++n) {
      const double k = spectral::half_wavenumber(grid, n);
      sym[n] = j < 0 ? lp_chi(k) : lp_phi(std::ldexp(k, -j));
    }
  }
}

std::span<const double> DyadicPartition::block_symbol(int j) const {
  if (j < -1 || j > jmax_) {
    throw std::out_of_range("block index " + std::to_string(j) + " outside [-1, " +
                            std::to_string(jmax_) + "]");
  }
  return symbols_[static_cast<std::size_t>(j + 1)];
}

DyadicPartition build_partition(const PeriodicGrid& grid) { return DyadicPartition(grid); }

Field block(const Field& f, int j, const DyadicPartition& partition) {
  if (!(f.grid() == partition.grid())) throw std::invalid_argument("block: grid mismatch");
  if (j > partition.jmax()) {
    throw std::out_of_range("block index " + std::to_string(j) + " exceeds jmax " +
                            std::to_string(partition.jmax()));
  }
  if (j < -1) return Field(f.grid());
  auto c = spectral::rfft(f.grid(), f.samples());
  const auto sym = partition.block_symbol(j);
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= sym[n];
  return Field(f.grid(), spectral::irfft(f.grid(), c));
}

std::vector<Field> blocks(const Field& f, const DyadicPartition& partition) {
  if (!(f.grid() == partition.grid())) throw std::invalid_argument("blocks: grid mismatch");
  const auto c = spectral::rfft(f.grid(), f.samples());
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(partition.jmax() + 2));
  for (int j = -1; j <= partition.jmax(); ++j) {
    auto cj = c;
    const auto sym = partition.block_symbol(j);
    for (std::size_t n = 0; n < cj.size(); ++n) cj[n] *= sym[n];
    out.emplace_back(f.grid(), spectral::irfft(f.grid(), cj));
  }
  return out;
}

Field low_freq_truncate(const Field& f, int n, const DyadicPartition& partition) {
  if (n < 0) throw std::invalid_argument("low_freq_truncate: n must be >= 0");
  if (!(f.grid() == partition.grid())) {
    throw std::invalid_argument("low_freq_truncate: grid mismatch");
  }
  if (n > partition.jmax()) return f;
  // Telescoped sum: S_n has symbol chi(2^-n k).
  auto c = spectral::rfft(f.grid(), f.samples());
  bool identity = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = lp_chi(std::ldexp(spectral::half_wavenumber(f.grid(), i), -n));
    identity = identity && w == 1.0;
    c[i] *= w;
  }
  if (identity) return f;
  return Field(f.grid(), spectral::irfft(f.grid(), c));
}

BesovTable besov_table(const Field& f, const BesovParams& params, const DyadicPartition& partition) {
  params.validate();
  BesovTable table;
  const auto b = blocks(f, partition);
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    const double w = std::exp2(j * params.s) * b[i].lp_norm(params.p);
    table.index.push_back(j);
    table.weighted.push_back(w);
    if (std::isinf(params.r)) {
      acc = std::max(acc, w);
    } else {
      acc += std::pow(w, params.r);
    }
  }
  table.norm = std::isinf(params.r) ? acc : std::pow(acc, 1.0 / params.r);
  return table;
}

double besov_norm(const Field& f, const BesovParams& params, const DyadicPartition& partition) {
  return besov_table(f, params, partition).norm;
}

double besov_norm(const Field& f, const BesovParams& params) {
  return besov_norm(f, params, DyadicPartition(f.grid()));
}

Field paraproduct(const Field& u, const Field& v, const DyadicPartition& partition) {
  require_same_grid(u, v, "paraproduct");
  const auto bu = blocks(u, partition);
  const auto bv = blocks(v, partition);
  const auto su = low_sums(bu);
  Field out(u.grid());
  // Delta_j v pairs with S_{j-1} u = su[j], which is zero for j <= 0.
  for (int j = 1; j <= partition.jmax(); ++j) {
    out += su[static_cast<std::size_t>(j)] * bv[static_cast<std::size_t>(j + 1)];
  }
  return out;
}

Field remainder(const Field& u, const Field& v, const DyadicPartition& partition) {
  require_same_grid(u, v, "remainder");
  const auto bu = blocks(u, partition);
  const auto bv = blocks(v, partition);
  const int count = static_cast<int>(bu.size());
  Field out(u.grid());
  for (int i = 0; i < count; ++i) {
    for (int d = -1; d <= 1; ++d) {
      const int k = i + d;
      if (k < 0 || k >= count) continue;
      out += bu[static_cast<std::size_t>(i)] * bv[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

}  // namespace fch
