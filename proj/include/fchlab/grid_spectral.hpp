#pragma once

// Periodic 1-D grid, real fields, Fourier transforms and spectral multipliers.
//
// Transform convention (used everywhere in the library):
//
//   c_n = (1/N) sum_j f_j exp(-i k_n x_j),   f_j = sum_n c_n exp(i k_n x_j)
//
// with x_j = j L / N, k_n = 2 pi n / L and n in [-N/2, N/2).  So c_0 is the
// sample mean.  The Nyquist mode n = -N/2 is treated as having k = -pi N / L.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fch {

using Complex = std::complex<double>;

class PeriodicGrid {
 public:
  PeriodicGrid(std::size_t n, double length);

  std::size_t size() const { return n_; }
  std::size_t half_size() const { return n_ / 2 + 1; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }

  /// Sample point x_j = j L / N.
  double x(std::size_t j) const { return static_cast<double>(j) * spacing(); }
  /// Representative of x_j in [-L/2, L/2).
  double signed_x(std::size_t j) const;
  /// Index of the sample at -x_j (mod L).
  std::size_t reflect(std::size_t j) const { return (n_ - j) % n_; }

  /// Mode number n in [-N/2, N/2) stored at FFT index idx.
  int mode(std::size_t idx) const;
  double wavenumber(int n) const;
  double max_wavenumber() const;

  bool operator==(const PeriodicGrid&) const = default;

 private:
  std::size_t n_;
  double length_;
};

/// Real grid function.
class Field {
 public:
  explicit Field(PeriodicGrid grid);
  Field(PeriodicGrid grid, std::vector<double> samples);

  /// Samples f(signed_x(j)).
  static Field from_function(const PeriodicGrid& grid,
                             const std::function<double(double)>& f);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  const std::vector<double>& values() const { return samples_; }
  double operator[](std::size_t j) const { return samples_[j]; }
  double& operator[](std::size_t j) { return samples_[j]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  double min() const;
  double max() const;
  double max_abs() const;
  /// Rectangle-rule integral h * sum f_j.
  double integral() const;
  /// Rectangle-rule L^p norm; p = infinity gives the max norm.
  double lp_norm(double p) const;
  double l2_norm() const { return lp_norm(2.0); }

 private:
  PeriodicGrid grid_;
  std::vector<double> samples_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product.
Field operator*(const Field& a, const Field& b);

void require_same_grid(const Field& a, const Field& b, const char* what);

/// Full Fourier coefficient sequence of a real field (Hermitian symmetric).
class Spectrum {
 public:
  Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs);

  const PeriodicGrid& grid() const { return grid_; }
  /// Coefficient c_n for n in [-N/2, N/2).
  Complex operator()(int n) const;
  /// Coefficients in FFT storage order (0, 1, ..., N/2-1, -N/2, ..., -1).
  const std::vector<Complex>& storage() const { return coeffs_; }

 private:
  PeriodicGrid grid_;
  std::vector<Complex> coeffs_;
};

/// Even Fourier symbol sigma(k).
struct Multiplier {
  std::function<double(double)> symbol;
  std::string label;
};

Multiplier helmholtz_multiplier(double a);

class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(std::string what_term, std::size_t index);
  const std::string& term() const { return term_; }
  std::size_t index() const { return index_; }

 private:
  std::string term_;
  std::size_t index_;
};

/// Throws NonFiniteError naming `term` and the first offending index.
void require_finite(std::span<const double> values, const std::string& term);

Spectrum forward_transform(const Field& f);
/// Uses the n >= 0 half of the spectrum; the input is assumed Hermitian.
Field inverse_transform(const Spectrum& s);

/// Spectral derivative of the given order; Nyquist mode dropped for odd orders.
Field derivative(const Field& f, int order);

Field apply_multiplier(const Field& f, const Multiplier& m);
/// (1 - d_xx)^a f
Field helmholtz_apply(const Field& f, double a);
/// (1 - d_xx)^{-a} f
Field helmholtz_invert(const Field& f, double a);

/// Zero every mode with |n| > N/3 (2/3-rule dealiasing).
Field dealias(const Field& f);

/// Trigonometric interpolant of f evaluated at arbitrary points.
std::vector<double> interpolate(const Field& f, std::span<const double> points);

// Half-spectrum primitives used on hot paths.  Index n = 0..N/2 holds c_n.
namespace spectral {

using HalfSpectrum = std::vector<Complex>;

HalfSpectrum rfft(const PeriodicGrid& grid, std::span<const double> samples);
std::vector<double> irfft(const PeriodicGrid& grid, const HalfSpectrum& coeffs);
void irfft(const PeriodicGrid& grid, const HalfSpectrum& coeffs, std::span<double> out);

/// Wavenumber of half-spectrum slot n, with the Nyquist slot mapped to -pi N / L.
double half_wavenumber(const PeriodicGrid& grid, std::size_t n);

void scale(const PeriodicGrid& grid, HalfSpectrum& c, const std::function<double(double)>& symbol);
HalfSpectrum differentiate(const PeriodicGrid& grid, const HalfSpectrum& c, int order);
void helmholtz(const PeriodicGrid& grid, HalfSpectrum& c, double power);
void truncate_two_thirds(const PeriodicGrid& grid, HalfSpectrum& c);

/// Evaluate sum_n c_n e^{i k_n x} (and optionally its x-derivative) at points.
void evaluate(const PeriodicGrid& grid, const HalfSpectrum& c, std::span<const double> points,
              std::span<double> values, std::span<double> derivatives = {});

}  // namespace spectral

}  // namespace fch
