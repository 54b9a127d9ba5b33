#include "fchlab/random_field.hpp"

#include <algorithm>
#include <cmath>

namespace fch {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Field random_smooth_field(const PeriodicGrid& grid, SplitMix64& rng, const RandomFieldSpec& spec) {
  spectral::HalfSpectrum c(grid.half_size(), Complex(0.0, 0.0));
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(std::max(spec.max_mode, 0)),
                                                grid.size() / 2 - 1);
  const double mean = rng.symmetric();
  if (spec.parity != Parity::odd) c[0] = mean;
  for (std::size_t n = 1; n <= top; ++n) {
    const double k = grid.wavenumber(static_cast<int>(n));
    const double env = std::exp(-(k * k) / (spec.decay_wavenumber * spec.decay_wavenumber));
    const double re = rng.symmetric();
    const double im = rng.symmetric();
    switch (spec.parity) {
      case Parity::none: c[n] = env * Complex(re, im); break;
      case Parity::even: c[n] = env * Complex(re, 0.0); break;
      case Parity::odd: c[n] = env * Complex(0.0, im); break;
    }
  }
  return Field(grid, spectral::irfft(grid, c));
}

double odd_defect(const Field& f) {
  double d = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) d = std::max(d, std::abs(f[j] + f[f.grid().reflect(j)]));
  return d;
}

double even_defect(const Field& f) {
  double d = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) d = std::max(d, std::abs(f[j] - f[f.grid().reflect(j)]));
  return d;
}

Field shift_samples(const Field& f, long shift) {
  const auto n = static_cast<long>(f.size());
  Field out(f.grid());
  for (long j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(((j + shift) % n + n) % n)] = f[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace fch
