#pragma once

// Convolution kernel G_a of (1 - d_xx)^{-a}, built from the heat semigroup:
//
//   G_a(x) = (1 / Gamma(a)) * int_0^inf s^{a-1} e^{-s} H(s, x) ds
//
// where H is the heat kernel of d_xx on the line, or its periodization when a
// finite period is given.  The prefactor 1/Gamma(a) makes the k = 0 symbol 1.

#include <limits>
#include <stdexcept>
#include <vector>

#include "fchlab/grid_spectral.hpp"

namespace fch {

struct QuadSpec {
  /// Trapezoid step in tau = log(s) before refinement.
  double initial_step = 0.5;
  /// Relative change between successive halvings accepted as converged.
  double tolerance = 1e-12;
  int max_refinements = 8;
  /// Period of the heat kernel; infinity means the line kernel.
  double period = std::numeric_limits<double>::infinity();
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double coarse, double fine);
  double coarse() const { return coarse_; }
  double fine() const { return fine_; }

 private:
  double coarse_;
  double fine_;
};

struct KernelValue {
  double value;
  double derivative;
};

/// G_a(x) and G_a'(x).  Evenness G(x) = G(-x) holds bit for bit.
KernelValue green_kernel_with_derivative(double a, double x, const QuadSpec& quad = {});
double green_kernel(double a, double x, const QuadSpec& quad = {});

/// Periodized kernel sampled at the grid's signed coordinates.
Field kernel_field(const PeriodicGrid& grid, double a, QuadSpec quad = {});

struct KernelSup {
  double value;
  double argmax;
  /// Relative change of the value when sampling and quadrature are refined.
  double refinement_change;
};

/// sup_x |G_a'(x)| for a > 1 (the constant in ||u_x||_inf <= C ||m||_{L^1}).
KernelSup kernel_derivative_sup_detail(double a,
                                       double period = std::numeric_limits<double>::infinity());
double kernel_derivative_sup(double a, double period = std::numeric_limits<double>::infinity());

struct ConvolutionSpec {
  int panels = 512;
  int nodes_per_panel = 10;
  QuadSpec quad{};
};

/// Fourier coefficients int_{-L/2}^{L/2} G(y) e^{-i k_n y} dy of the periodized
/// kernel at the non-negative grid modes, by physical-space quadrature.
std::vector<double> kernel_symbol(const PeriodicGrid& grid, double a, ConvolutionSpec spec = {});

/// Convolution of the trigonometric interpolant of f with the periodized kernel.
Field kernel_convolve(const Field& f, double a, const ConvolutionSpec& spec = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fch
