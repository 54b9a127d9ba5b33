#pragma once

// Time-sampled field stored as half spectra, with cubic Hermite interpolation
// between stamps.

#include <vector>

#include "fchlab/grid_spectral.hpp"

namespace fch {

class TimeSeries {
 public:
  /// Values with exact time derivatives at each stamp.
  TimeSeries(std::vector<double> times, const std::vector<Field>& values,
             const std::vector<Field>& derivatives);
  /// Values only; derivatives estimated by second-order finite differences.
  TimeSeries(std::vector<double> times, const std::vector<Field>& values);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }

  const spectral::HalfSpectrum& stamp_spectrum(std::size_t i) const { return values_[i]; }
  Field stamp(std::size_t i) const;

  /// Interpolated spectrum at t; throws std::out_of_range outside [start, end].
  spectral::HalfSpectrum spectrum_at(double t) const;
  Field at(double t) const;

 private:
  void check_times() const;

  PeriodicGrid grid_;
  std::vector<double> times_;
  std::vector<spectral::HalfSpectrum> values_;
  std::vector<spectral::HalfSpectrum> derivatives_;
};

}  // namespace fch
