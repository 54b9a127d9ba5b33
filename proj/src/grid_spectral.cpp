#include "fchlab/grid_spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace fch {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// FFTW plans keyed by size.  Planning is not thread safe, execution through the
// new-array interface is, so only the cache lookup is locked.
class PlanCache {
 public:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  const Plans& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> real(n);
    std::vector<Complex> half(n / 2 + 1);
    auto* cplx = reinterpret_cast<fftw_complex*>(half.data());
    const int len = static_cast<int>(n);
    Plans p;
    p.forward = fftw_plan_dft_r2c_1d(len, real.data(), cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_c2r_1d(len, cplx, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    return plans_.emplace(n, p).first->second;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  std::mutex mutex_;
  std::map<std::size_t, Plans> plans_;
};

}  // namespace

// ---------------------------------------------------------------------------
// PeriodicGrid

PeriodicGrid::PeriodicGrid(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }
}

double PeriodicGrid::signed_x(std::size_t j) const {
  return j < n_ / 2 ? x(j) : x(j) - length_;
}

int PeriodicGrid::mode(std::size_t idx) const {
  const auto n = static_cast<long>(n_);
  const auto i = static_cast<long>(idx);
  return static_cast<int>(i < n / 2 ? i : i - n);
}

double PeriodicGrid::wavenumber(int n) const {
  return 2.0 * std::numbers::pi * static_cast<double>(n) / length_;
}

double PeriodicGrid::max_wavenumber() const {
  return std::numbers::pi * static_cast<double>(n_) / length_;
}

// ---------------------------------------------------------------------------
// Field

Field::Field(PeriodicGrid grid) : grid_(grid), samples_(grid.size(), 0.0) {}

Field::Field(PeriodicGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw std::invalid_argument("field has " + std::to_string(samples_.size()) +
                                " samples but grid has " + std::to_string(grid_.size()));
  }
}

Field Field::from_function(const PeriodicGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.signed_x(j));
  return Field(grid, std::move(v));
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument(std::string(what) + ": fields live on different grids");
  }
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other, "field addition");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other, "field subtraction");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : samples_) v *= s;
  return *this;
}

double Field::min() const { return *std::min_element(samples_.begin(), samples_.end()); }
double Field::max() const { return *std::max_element(samples_.begin(), samples_.end()); }

double Field::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Field::integral() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s * grid_.spacing();
}

double Field::lp_norm(double p) const {
  if (std::isinf(p)) return max_abs();
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  double s = 0.0;
  if (p == 2.0) {
    for (double v : samples_) s += v * v;
    return std::sqrt(s * grid_.spacing());
  }
  if (p == 1.0) {
    for (double v : samples_) s += std::abs(v);
    return s * grid_.spacing();
  }
  for (double v : samples_) s += std::pow(std::abs(v), p);
  return std::pow(s * grid_.spacing(), 1.0 / p);
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field operator*(const Field& a, const Field& b) {
  require_same_grid(a, b, "field product");
  Field out(a.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("spectrum length does not match grid size");
  }
}

Complex Spectrum::operator()(int n) const {
  const int half = static_cast<int>(grid_.size() / 2);
  if (n < -half || n >= half) throw std::out_of_range("mode index outside [-N/2, N/2)");
  const auto idx = n >= 0 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n + 2 * half);
  return coeffs_[idx];
}

Multiplier helmholtz_multiplier(double a) {
  return Multiplier{[a](double k) { return std::pow(1.0 + k * k, a); },
                    "(1+k^2)^" + std::to_string(a)};
}

NonFiniteError::NonFiniteError(std::string what_term, std::size_t index)
    : std::runtime_error("non-finite value in " + what_term + " at index " + std::to_string(index)),
      term_(std::move(what_term)),
      index_(index) {}

void require_finite(std::span<const double> values, const std::string& term) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) throw NonFiniteError(term, j);
  }
}

// ---------------------------------------------------------------------------
// Half-spectrum primitives

namespace spectral {

HalfSpectrum rfft(const PeriodicGrid& grid, std::span<const double> samples) {
  const std::size_t n = grid.size();
  const auto& plans = PlanCache::instance().get(n);
  HalfSpectrum out(n / 2 + 1);
  // r2c does not modify its input, but the FFTW signature is non-const.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(samples.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= inv;
  out.front().imag(0.0);
  out.back().imag(0.0);
  return out;
}

void irfft(const PeriodicGrid& grid, const HalfSpectrum& coeffs, std::span<double> out) {
  const std::size_t n = grid.size();
  const auto& plans = PlanCache::instance().get(n);
  HalfSpectrum work = coeffs;  // c2r overwrites its input
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(work.data()), out.data());
}

std::vector<double> irfft(const PeriodicGrid& grid, const HalfSpectrum& coeffs) {
  std::vector<double> out(grid.size());
  irfft(grid, coeffs, out);
  return out;
}

double half_wavenumber(const PeriodicGrid& grid, std::size_t n) {
  const std::size_t nyq = grid.size() / 2;
  return n == nyq ? -grid.max_wavenumber() : grid.wavenumber(static_cast<int>(n));
}

void scale(const PeriodicGrid& grid, HalfSpectrum& c, const std::function<double(double)>& symbol) {
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= symbol(half_wavenumber(grid, n));
}

HalfSpectrum differentiate(const PeriodicGrid& grid, const HalfSpectrum& c, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
  HalfSpectrum out(c.size());
  const std::size_t nyq = grid.size() / 2;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n == nyq && order % 2 == 1) {
      out[n] = 0.0;
      continue;
    }
    const Complex ik(0.0, half_wavenumber(grid, n));
    Complex factor(1.0, 0.0);
    for (int o = 0; o < order; ++o) factor *= ik;
    out[n] = c[n] * factor;
  }
  return out;
}

void helmholtz(const PeriodicGrid& grid, HalfSpectrum& c, double power) {
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double k = half_wavenumber(grid, n);
    c[n] *= std::pow(1.0 + k * k, power);
  }
}

void truncate_two_thirds(const PeriodicGrid& grid, HalfSpectrum& c) {
  const std::size_t cutoff = grid.size() / 3;
  for (std::size_t n = cutoff + 1; n < c.size(); ++n) c[n] = 0.0;
}

void evaluate(const PeriodicGrid& grid, const HalfSpectrum& c, std::span<const double> points,
              std::span<double> values, std::span<double> derivatives) {
  const std::size_t nyq = grid.size() / 2;
  const double k1 = grid.wavenumber(1);
  const bool want_deriv = !derivatives.empty();
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double x = points[p];
    const Complex step = std::polar(1.0, k1 * x);
    Complex w = step;
    double v = 0.0;
    double d = 0.0;
    for (std::size_t n = 1; n < nyq; ++n) {
      if (n % 64 == 0) w = std::polar(1.0, k1 * x * static_cast<double>(n));
      const Complex term = c[n] * w;
      v += term.real();
      if (want_deriv) d -= static_cast<double>(n) * term.imag();
      w *= step;
    }
    values[p] = c[0].real() + 2.0 * v + c[nyq].real() * std::cos(grid.max_wavenumber() * x);
    if (want_deriv) derivatives[p] = 2.0 * k1 * d;
  }
}

}  // namespace spectral

// ---------------------------------------------------------------------------
// Field-level operations

Spectrum forward_transform(const Field& f) {
  require_finite(f.samples(), "forward_transform input");
  const auto& grid = f.grid();
  const auto half = spectral::rfft(grid, f.samples());
  const std::size_t n = grid.size();
  std::vector<Complex> full(n);
  for (std::size_t i = 0; i <= n / 2; ++i) full[i] = half[i];
  for (std::size_t i = 1; i < n / 2; ++i) full[n - i] = std::conj(half[i]);
  return Spectrum(grid, std::move(full));
}

Field inverse_transform(const Spectrum& s) {
  const auto& grid = s.grid();
  spectral::HalfSpectrum half(grid.half_size());
  for (std::size_t i = 0; i < half.size(); ++i) half[i] = s.storage()[i];
  return Field(grid, spectral::irfft(grid, half));
}

Field derivative(const Field& f, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
  require_finite(f.samples(), "derivative input");
  const auto& grid = f.grid();
  const auto c = spectral::differentiate(grid, spectral::rfft(grid, f.samples()), order);
  return Field(grid, spectral::irfft(grid, c));
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  require_finite(f.samples(), "multiplier input");
  const auto& grid = f.grid();
  auto c = spectral::rfft(grid, f.samples());
  spectral::scale(grid, c, m.symbol);
  return Field(grid, spectral::irfft(grid, c));
}

Field helmholtz_apply(const Field& f, double a) {
  require_finite(f.samples(), "helmholtz_apply input");
  auto c = spectral::rfft(f.grid(), f.samples());
  spectral::helmholtz(f.grid(), c, a);
  return Field(f.grid(), spectral::irfft(f.grid(), c));
}

Field helmholtz_invert(const Field& f, double a) {
  require_finite(f.samples(), "helmholtz_invert input");
  auto c = spectral::rfft(f.grid(), f.samples());
  spectral::helmholtz(f.grid(), c, -a);
  return Field(f.grid(), spectral::irfft(f.grid(), c));
}

Field dealias(const Field& f) {
  auto c = spectral::rfft(f.grid(), f.samples());
  spectral::truncate_two_thirds(f.grid(), c);
  return Field(f.grid(), spectral::irfft(f.grid(), c));
}

std::vector<double> interpolate(const Field& f, std::span<const double> points) {
  const auto c = spectral::rfft(f.grid(), f.samples());
  std::vector<double> out(points.size());
  spectral::evaluate(f.grid(), c, points, out);
  return out;
}

}  // namespace fch
