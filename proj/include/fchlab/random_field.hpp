#pragma once

// Seeded pseudo-randomness.  SplitMix64 is used so that streams are
// reproducible across platforms and languages:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// uniform() maps the top 53 bits to [0, 1).

#include <cstdint>

#include "fchlab/grid_spectral.hpp"

namespace fch {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();
  /// Uniform on [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::uint64_t state_;
};

enum class Parity { none, even, odd };

struct RandomFieldSpec {
  /// Coefficient envelope exp(-(k / decay_wavenumber)^2).
  double decay_wavenumber = 4.0;
  /// Largest mode number |n| that receives a coefficient.
  int max_mode = 64;
  Parity parity = Parity::none;
};

/// Band-limited random real field with Gaussian-decaying spectrum.
Field random_smooth_field(const PeriodicGrid& grid, SplitMix64& rng, const RandomFieldSpec& spec = {});

/// Odd-defect max_j |f(x_j) + f(-x_j)|.
double odd_defect(const Field& f);
/// Even-defect max_j |f(x_j) - f(-x_j)|.
double even_defect(const Field& f);

/// Cyclic shift by `shift` samples: out[j] = f[j - shift].
Field shift_samples(const Field& f, long shift);

}  // namespace fch
