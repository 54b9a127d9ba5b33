#include "fchlab/time_series.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fch {

namespace {

spectral::HalfSpectrum combine(const spectral::HalfSpectrum& a, double wa,
                               const spectral::HalfSpectrum& b, double wb,
                               const spectral::HalfSpectrum& c, double wc) {
  spectral::HalfSpectrum out(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = wa * a[n] + wb * b[n] + wc * c[n];
  return out;
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> times, const std::vector<Field>& values,
                       const std::vector<Field>& derivatives)
    : grid_(values.at(0).grid()), times_(std::move(times)) {
  if (values.size() != times_.size() || derivatives.size() != times_.size()) {
    throw std::invalid_argument("time series: stamp, value and derivative counts differ");
  }
  check_times();
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_same_grid(values[i], values[0], "time series");
    require_same_grid(derivatives[i], values[0], "time series");
    values_.push_back(spectral::rfft(grid_, values[i].samples()));
    derivatives_.push_back(spectral::rfft(grid_, derivatives[i].samples()));
  }
}

TimeSeries::TimeSeries(std::vector<double> times, const std::vector<Field>& values)
    : grid_(values.at(0).grid()), times_(std::move(times)) {
  if (values.size() != times_.size()) {
    throw std::invalid_argument("time series: stamp and value counts differ");
  }
  check_times();
  for (const auto& v : values) {
    require_same_grid(v, values[0], "time series");
    values_.push_back(spectral::rfft(grid_, v.samples()));
  }
  const std::size_t count = times_.size();
  derivatives_.resize(count);
  if (count == 1) {
    derivatives_[0].assign(values_[0].size(), Complex(0.0, 0.0));
    return;
  }
  if (count == 2) {
    const double h = times_[1] - times_[0];
    const auto slope = combine(values_[0], -1.0 / h, values_[1], 1.0 / h, values_[1], 0.0);
    derivatives_[0] = slope;
    derivatives_[1] = slope;
    return;
  }
  for (std::size_t i = 0; i < count; ++i) {
    // Second-order three-point formulas on a non-uniform stencil.
    const std::size_t c = std::clamp<std::size_t>(i, 1, count - 2);
    const double t0 = times_[c - 1];
    const double t1 = times_[c];
    const double t2 = times_[c + 1];
    const double t = times_[i];
    const double w0 = (2.0 * t - t1 - t2) / ((t0 - t1) * (t0 - t2));
    const double w1 = (2.0 * t - t0 - t2) / ((t1 - t0) * (t1 - t2));
    const double w2 = (2.0 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
    derivatives_[i] = combine(values_[c - 1], w0, values_[c], w1, values_[c + 1], w2);
  }
}

void TimeSeries::check_times() const {
  if (times_.empty()) throw std::invalid_argument("time series needs at least one stamp");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("time series stamps must be strictly increasing");
    }
  }
}

Field TimeSeries::stamp(std::size_t i) const { return Field(grid_, spectral::irfft(grid_, values_.at(i))); }

spectral::HalfSpectrum TimeSeries::spectrum_at(double t) const {
  const double span = times_.back() - times_.front();
  const double slack = 1e-12 * std::max(1.0, span);
  if (t < times_.front() - slack || t > times_.back() + slack) {
    throw std::out_of_range("time " + std::to_string(t) + " outside sampled range [" +
                            std::to_string(times_.front()) + ", " + std::to_string(times_.back()) + "]");
  }
  if (times_.size() == 1) return values_[0];
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::distance(times_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, times_.size() - 1) - 1;
  const double h = times_[i + 1] - times_[i];
  const double s = std::clamp((t - times_[i]) / h, 0.0, 1.0);
  if (s == 0.0) return values_[i];
  if (s == 1.0) return values_[i + 1];
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = (s3 - 2.0 * s2 + s) * h;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = (s3 - s2) * h;
  spectral::HalfSpectrum out(values_[i].size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = h00 * values_[i][n] + h10 * derivatives_[i][n] + h01 * values_[i + 1][n] +
             h11 * derivatives_[i + 1][n];
  }
  return out;
}

Field TimeSeries::at(double t) const { return Field(grid_, spectral::irfft(grid_, spectrum_at(t))); }

}  // namespace fch
