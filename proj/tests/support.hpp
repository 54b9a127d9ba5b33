#pragma once

// Test-side helpers.  The generator here is deliberately not the library's
// SplitMix64 so property tests do not share code with what they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fchlab/grid_spectral.hpp"

namespace fch::test {

// xorshift64*
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x2545F4914F6CDD1Dull) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545F4914F6CDD1Dull;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t s_;
};

// Sum of `modes` random sinusoids with decaying amplitudes.  Evaluated
// pointwise, so it never touches the library's transforms.
inline Field smooth_field(const PeriodicGrid& g, Rng& rng, int modes = 12, int max_mode = 24) {
  std::vector<double> amp, phase;
  std::vector<int> n;
  for (int i = 0; i < modes; ++i) {
    const int k = static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_mode + 1));
    n.push_back(k);
    amp.push_back(rng.range(-1, 1) * std::exp(-0.1 * k));
    phase.push_back(rng.range(0, 2 * std::numbers::pi));
  }
  Field f(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    double v = 0.0;
    for (int i = 0; i < modes; ++i) {
      v += amp[i] * std::cos(2 * std::numbers::pi * n[i] * g.x(j) / g.length() + phase[i]);
    }
    f[j] = v;
  }
  return f;
}

inline Field odd_part(const Field& f) {
  Field o(f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) o[j] = 0.5 * (f[j] - f[f.grid().reflect(j)]);
  return o;
}

// O(N^2) DFT with the library's normalisation; returns c_n for n in [-N/2, N/2).
inline std::vector<std::complex<double>> naive_dft(const Field& f) {
  const auto N = static_cast<long>(f.size());
  std::vector<std::complex<double>> c(N);
  for (long n = -N / 2; n < N / 2; ++n) {
    std::complex<double> acc = 0.0;
    for (long j = 0; j < N; ++j) {
      const double th = -2 * std::numbers::pi * static_cast<double>(n * j % N) / static_cast<double>(N);
      acc += f[j] * std::complex<double>(std::cos(th), std::sin(th));
    }
    c[n + N / 2] = acc / static_cast<double>(N);
  }
  return c;
}

inline double max_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

inline double rel_diff(const Field& a, const Field& b) {
  const double s = std::max(a.max_abs(), b.max_abs());
  return s > 0.0 ? max_diff(a, b) / s : max_diff(a, b);
}

}  // namespace fch::test
