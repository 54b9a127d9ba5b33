#include "fchlab/picard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fch {

namespace {

Field spectral_derivative(const Field& f) {
  return Field(f.grid(), spectral::irfft(f.grid(), spectral::differentiate(
                                                       f.grid(), spectral::rfft(f.grid(), f.samples()), 1)));
}

// Bilinear form with F(u) = Q(u, u):
//   Q(u, v) = -L(u (Lambda v)_x) + u v_x - 2 L(u_x Lambda v)
Field quadratic_form(const Field& u, const Field& v, double a) {
  const auto& grid = u.grid();
  auto vh = spectral::rfft(grid, v.samples());
  const auto vx = spectral::irfft(grid, spectral::differentiate(grid, vh, 1));
  spectral::helmholtz(grid, vh, a);
  const auto mv = spectral::irfft(grid, vh);
  const auto mvx = spectral::irfft(grid, spectral::differentiate(grid, vh, 1));
  const auto ux = spectral_derivative(u);

  std::vector<double> inner(grid.size());
  for (std::size_t j = 0; j < inner.size(); ++j) inner[j] = u[j] * mvx[j] + 2.0 * ux[j] * mv[j];
  require_finite(inner, "source products u m_x + 2 u_x m");
  auto ih = spectral::rfft(grid, inner);
  spectral::helmholtz(grid, ih, -a);
  auto out = spectral::irfft(grid, ih);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -out[j] + u[j] * vx[j];
  require_finite(out, "source term");
  return Field(grid, std::move(out));
}

}  // namespace

void PicardConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("picard horizon must be positive");
  if (iterations < 2) throw std::invalid_argument("picard needs at least 2 iterations");
  if (!(dt > 0.0)) throw std::invalid_argument("picard dt must be positive");
  norm.validate();
  (void)grid();
}

Field commutator(const Field& u, double a) {
  const Field m = helmholtz_apply(u, a);
  const Field um_x = u * spectral_derivative(m);
  return helmholtz_invert(um_x, a) - u * spectral_derivative(u);
}

Field commutator_bony(const Field& u, double a, const DyadicPartition& partition) {
  const Field m = helmholtz_apply(u, a);
  const Field mx = spectral_derivative(m);
  const Field ux = spectral_derivative(u);
  // [L, T_u d_x] m = L(T_u m_x) - T_u (d_x L m), and d_x L m = u_x.
  Field out = helmholtz_invert(paraproduct(u, mx, partition), a) - paraproduct(u, ux, partition);
  out += helmholtz_invert(paraproduct(mx, u, partition), a);
  out -= paraproduct(ux, u, partition);
  out += helmholtz_invert(remainder(u, mx, partition), a);
  out -= remainder(u, ux, partition);
  return out;
}

Field source_term(const Field& u, double a) {
  require_finite(u.samples(), "source input u");
  return quadratic_form(u, u, a);
}

Field source_term_rate(const Field& u, const Field& ut, double a) {
  require_same_grid(u, ut, "source_term_rate");
  return quadratic_form(ut, u, a) + quadratic_form(u, ut, a);
}

Trajectory linear_transport_solve(const TimeSeries& advector, const TimeSeries& source,
                                  const Field& init, double dt, double horizon) {
  if (!(dt > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("linear_transport_solve: dt and horizon must be positive");
  }
  if (!(advector.grid() == init.grid()) || !(source.grid() == init.grid())) {
    throw std::invalid_argument("linear_transport_solve: grid mismatch");
  }
  const double slack = 1e-12 * std::max(1.0, horizon);
  for (const auto* series : {&advector, &source}) {
    if (series->start() > slack || series->end() < horizon - slack) {
      throw std::out_of_range("linear_transport_solve: coefficients do not cover [0, horizon]");
    }
  }
  const auto& grid = init.grid();
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  const double h = horizon / static_cast<double>(steps);

  auto field_at = [&](const TimeSeries& ts, double t) {
    return spectral::irfft(grid, ts.spectrum_at(std::min(t, ts.end())));
  };
  auto f = [&](double t, std::span<const double> v) {
    const auto adv = field_at(advector, t);
    const auto src = field_at(source, t);
    const auto vx = spectral::irfft(grid, spectral::differentiate(grid, spectral::rfft(grid, v), 1));
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = -adv[j] * vx[j] + src[j];
    return out;
  };

  Trajectory traj;
  traj.times.reserve(steps + 1);
  std::vector<double> v(init.values());
  std::vector<double> stage(v.size());
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) * h;
    auto k1 = f(t, v);
    traj.times.push_back(t);
    traj.values.emplace_back(grid, v);
    traj.rates.emplace_back(grid, k1);
    if (s == steps) break;
    for (std::size_t j = 0; j < v.size(); ++j) stage[j] = v[j] + 0.5 * h * k1[j];
    auto k2 = f(t + 0.5 * h, stage);
    for (std::size_t j = 0; j < v.size(); ++j) stage[j] = v[j] + 0.5 * h * k2[j];
    auto k3 = f(t + 0.5 * h, stage);
    for (std::size_t j = 0; j < v.size(); ++j) stage[j] = v[j] + h * k3[j];
    auto k4 = f(t + h, stage);
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    require_finite(v, "linear transport state");
  }
  return traj;
}

PicardResult iterate(const Field& u0, const PicardConfig& config) {
  config.validate();
  if (!(u0.grid() == config.grid())) {
    throw std::invalid_argument("picard: initial field grid does not match configuration");
  }
  const auto& grid = u0.grid();
  const DyadicPartition partition(grid);
  const auto steps = static_cast<std::size_t>(std::ceil(config.horizon / config.dt - 1e-9));
  const double h = config.horizon / static_cast<double>(steps);

  PicardResult result;
  result.initial_norm = besov_norm(u0, config.norm, partition);

  Trajectory prev;
  for (std::size_t s = 0; s <= steps; ++s) {
    prev.times.push_back(static_cast<double>(s) * h);
    prev.values.emplace_back(grid);
    prev.rates.emplace_back(grid);
  }
  result.iterates.push_back(IterateRecord{0, prev, 0.0, 0.0});

  double max_sup = 0.0;
  int growth_streak = 0;
  for (int n = 0; n < config.iterations; ++n) {
    const TimeSeries advector(prev.times, prev.values, prev.rates);
    std::vector<Field> src_values;
    std::vector<Field> src_rates;
    for (std::size_t k = 0; k < prev.times.size(); ++k) {
      src_values.push_back(source_term(prev.values[k], config.a));
      src_rates.push_back(source_term_rate(prev.values[k], prev.rates[k], config.a));
    }
    const TimeSeries source(prev.times, src_values, src_rates);
    const Field init = low_freq_truncate(u0, std::min(n + 1, partition.jmax()), partition);
    Trajectory next = linear_transport_solve(advector, source, init, h, config.horizon);

    double diff = 0.0;
    double sup = 0.0;
    for (std::size_t k = 0; k < next.values.size(); ++k) {
      diff = std::max(diff, besov_norm(next.values[k] - prev.values[k], config.norm, partition));
      sup = std::max(sup, besov_norm(next.values[k], config.norm, partition));
    }
    max_sup = std::max(max_sup, sup);
    result.differences.push_back(diff);
    result.iterates.push_back(IterateRecord{n + 1, next, sup, diff});

    const std::size_t count = result.differences.size();
    if (count >= 2) {
      const double d_prev = result.differences[count - 2];
      growth_streak = diff > d_prev ? growth_streak + 1 : 0;
      if (growth_streak >= 3) {
        result.diverged = true;
        result.notice = "successive differences grew for 3 consecutive iterations";
        break;
      }
    }
    prev = std::move(next);
  }

  // Ratios are only meaningful above the round-off floor.
  const double floor = config.tolerance * std::max(max_sup, 1e-300);
  for (std::size_t i = 0; i + 1 < result.differences.size(); ++i) {
    if (result.differences[i] > floor && result.differences[i + 1] > floor) {
      result.ratios.push_back(result.differences[i + 1] / result.differences[i]);
    }
  }
  // The first ratio involves u^1 - u^0 = S_1 u_0 and is not part of the tail.
  const std::size_t tail = std::min<std::size_t>(3, result.ratios.size() > 1 ? result.ratios.size() - 1 : result.ratios.size());
  result.tail_ratio = 0.0;
  for (std::size_t i = result.ratios.size() - tail; i < result.ratios.size(); ++i) {
    result.tail_ratio = std::max(result.tail_ratio, result.ratios[i]);
  }
  result.geometric = !result.diverged && tail >= 2 && result.tail_ratio < 1.0;
  if (!result.geometric && result.notice.empty()) {
    result.notice = tail < 2 ? "too few differences above round-off to judge the tail"
                             : "tail ratio not below 1";
  }

  // Smallest C >= 1 with ||u^n(t)|| <= C ||u0|| / (1 - C t ||u0||^2) for all n, t.
  const double u0n = result.initial_norm;
  double c_fit = 1.0;
  if (u0n > 0.0) {
    for (const auto& rec : result.iterates) {
      for (std::size_t k = 0; k < rec.trajectory.values.size(); ++k) {
        const double v = besov_norm(rec.trajectory.values[k], config.norm, partition);
        const double t = rec.trajectory.times[k];
        c_fit = std::max(c_fit, v / (u0n * (1.0 + v * t * u0n)));
      }
    }
    result.existence_window = 1.0 / (c_fit * u0n * u0n);
  } else {
    result.existence_window = std::numeric_limits<double>::infinity();
  }
  result.fitted_constant = c_fit;
  return result;
}

}  // namespace fch
