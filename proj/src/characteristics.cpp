#include "fchlab/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fchlab/random_field.hpp"

namespace fch {

namespace {

struct FlowRate {
  std::vector<double> dq;
  std::vector<double> dp;
};

FlowRate flow_rate(const TimeSeries& field, double t, const std::vector<double>& q,
                   const std::vector<double>& p) {
  const auto c = field.spectrum_at(std::min(t, field.end()));
  FlowRate r{std::vector<double>(q.size()), std::vector<double>(q.size())};
  std::vector<double> vx(q.size());
  spectral::evaluate(field.grid(), c, q, r.dq, vx);
  for (std::size_t k = 0; k < q.size(); ++k) r.dp[k] = vx[k] * p[k];
  return r;
}

void check_monotone(FlowMap& flow, std::size_t i) {
  if (!flow.events.empty()) return;
  const auto& q = flow.q[i];
  const auto& p = flow.q_xi[i];
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!(p[k] > 0.0)) {
      flow.events.push_back({flow.times[i], k, "q_xi no longer positive"});
      return;
    }
    if (k > 0 && !(q[k] > q[k - 1])) {
      flow.events.push_back({flow.times[i], k, "q(t, .) no longer increasing"});
      return;
    }
  }
}

}  // namespace

std::size_t FlowMap::origin_label() const {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == 0.0) return k;
  }
  throw std::invalid_argument("flow map has no label at xi = 0");
}

std::vector<double> grid_labels(const PeriodicGrid& grid, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("label stride must be positive");
  std::vector<double> out;
  const std::size_t n = grid.size();
  // Signed coordinates increase from index N/2 through N-1 and then 0..N/2-1.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + n / 2) % n;
    const long offset = static_cast<long>(i) - static_cast<long>(n / 2);
    if (offset % static_cast<long>(stride) == 0) out.push_back(grid.signed_x(j));
  }
  return out;
}

FlowMap flow_map(const TimeSeries& field, std::span<const double> labels, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("flow_map: dt must be positive");
  FlowMap flow;
  flow.times = field.times();
  flow.labels.assign(labels.begin(), labels.end());
  std::vector<double> q(flow.labels);
  std::vector<double> p(q.size(), 1.0);
  flow.q.push_back(q);
  flow.q_xi.push_back(p);
  check_monotone(flow, 0);

  const std::size_t count = q.size();
  std::vector<double> sq(count);
  std::vector<double> sp(count);
  for (std::size_t i = 0; i + 1 < flow.times.size(); ++i) {
    const double t0 = flow.times[i];
    const double span = flow.times[i + 1] - t0;
    const auto sub = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    const double h = span / static_cast<double>(sub);
    for (std::size_t s = 0; s < sub; ++s) {
      const double t = t0 + static_cast<double>(s) * h;
      const auto k1 = flow_rate(field, t, q, p);
      for (std::size_t k = 0; k < count; ++k) {
        sq[k] = q[k] + 0.5 * h * k1.dq[k];
        sp[k] = p[k] + 0.5 * h * k1.dp[k];
      }
      const auto k2 = flow_rate(field, t + 0.5 * h, sq, sp);
      for (std::size_t k = 0; k < count; ++k) {
        sq[k] = q[k] + 0.5 * h * k2.dq[k];
        sp[k] = p[k] + 0.5 * h * k2.dp[k];
      }
      const auto k3 = flow_rate(field, t + 0.5 * h, sq, sp);
      for (std::size_t k = 0; k < count; ++k) {
        sq[k] = q[k] + h * k3.dq[k];
        sp[k] = p[k] + h * k3.dp[k];
      }
      const auto k4 = flow_rate(field, t + h, sq, sp);
      for (std::size_t k = 0; k < count; ++k) {
        q[k] += h / 6.0 * (k1.dq[k] + 2.0 * k2.dq[k] + 2.0 * k3.dq[k] + k4.dq[k]);
        p[k] += h / 6.0 * (k1.dp[k] + 2.0 * k2.dp[k] + 2.0 * k3.dp[k] + k4.dp[k]);
      }
    }
    flow.q.push_back(q);
    flow.q_xi.push_back(p);
    check_monotone(flow, i + 1);
  }
  return flow;
}

TimeSeries transport_series(const std::vector<StepState>& trajectory, double a, bool dealias_on,
                            Advection advection) {
  if (trajectory.empty()) throw std::invalid_argument("transport_series: empty trajectory");
  std::vector<double> times;
  std::vector<Field> values;
  std::vector<Field> rates;
  for (const auto& s : trajectory) {
    times.push_back(s.t);
    Field mt = rhs(s.m, a, dealias_on);
    if (advection == Advection::velocity) {
      values.push_back(velocity(s.m, a));
      rates.push_back(helmholtz_invert(mt, a));
    } else {
      values.push_back(s.m);
      rates.push_back(std::move(mt));
    }
  }
  return TimeSeries(std::move(times), values, rates);
}

std::vector<double> sample_field(const Field& f, std::span<const double> points) {
  const auto& grid = f.grid();
  std::vector<double> out(points.size());
  std::vector<double> off_pts;
  std::vector<std::size_t> off_idx;
  const double h = grid.spacing();
  const auto n = static_cast<long>(grid.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = std::round(points[i] / h);
    if (static_cast<double>(r) * h == points[i] && std::abs(r) < 1e15) {
      long j = static_cast<long>(r) % n;
      if (j < 0) j += n;
      out[i] = f[static_cast<std::size_t>(j)];
    } else {
      off_pts.push_back(points[i]);
      off_idx.push_back(i);
    }
  }
  if (!off_pts.empty()) {
    const auto vals = interpolate(f, off_pts);
    for (std::size_t i = 0; i < off_idx.size(); ++i) out[off_idx[i]] = vals[i];
  }
  return out;
}

std::vector<std::vector<double>> lagrangian_defects(const FlowMap& flow,
                                                   const std::vector<StepState>& m_traj,
                                                   const Field& m0) {
  if (flow.times.size() != m_traj.size()) {
    throw std::invalid_argument("lagrangian_invariant: flow has " + std::to_string(flow.times.size()) +
                                " stamps, trajectory has " + std::to_string(m_traj.size()));
  }
  for (std::size_t i = 0; i < m_traj.size(); ++i) {
    if (std::abs(flow.times[i] - m_traj[i].t) > 1e-12 * std::max(1.0, std::abs(m_traj[i].t))) {
      throw std::invalid_argument("lagrangian_invariant: stamp mismatch at index " + std::to_string(i));
    }
  }
  const auto m0_at_labels = sample_field(m0, flow.labels);
  const double denom = m0.max_abs() + 1e-300;
  std::vector<std::vector<double>> out;
  out.reserve(m_traj.size());
  for (std::size_t i = 0; i < m_traj.size(); ++i) {
    auto row = sample_field(m_traj[i].m, flow.q[i]);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double p = flow.q_xi[i][k];
      row[k] = std::abs(row[k] * p * p - m0_at_labels[k]) / denom;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> lagrangian_invariant(const FlowMap& flow, const std::vector<StepState>& m_traj,
                                         const Field& m0) {
  std::vector<double> defect;
  for (const auto& row : lagrangian_defects(flow, m_traj, m0)) {
    defect.push_back(row.empty() ? 0.0 : *std::max_element(row.begin(), row.end()));
  }
  return defect;
}

bool SignReport::odd_regions_hold(double tol) const {
  return std::all_of(rows.begin(), rows.end(), [tol](const SignRow& r) {
    const double bound = tol * r.scale;
    return r.min_right >= -bound && r.max_left <= bound && r.odd_defect <= bound;
  });
}

bool SignReport::nonnegative_holds(double tol) const {
  return std::all_of(rows.begin(), rows.end(),
                     [tol](const SignRow& r) { return r.min_all >= -tol * r.scale; });
}

SignReport sign_audit(const std::vector<StepState>& m_traj, const FlowMap& flow) {
  if (flow.times.size() != m_traj.size()) {
    throw std::invalid_argument("sign_audit: flow and trajectory stamp counts differ");
  }
  const std::size_t origin = flow.origin_label();
  SignReport report;
  for (std::size_t i = 0; i < m_traj.size(); ++i) {
    const Field& m = m_traj[i].m;
    const auto& grid = m.grid();
    SignRow row;
    row.t = m_traj[i].t;
    row.pivot = flow.q[i][origin];
    row.scale = m.max_abs();
    row.min_right = std::numeric_limits<double>::infinity();
    row.max_left = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double x = grid.signed_x(j);
      if (x >= row.pivot) row.min_right = std::min(row.min_right, m[j]);
      if (x <= row.pivot) row.max_left = std::max(row.max_left, m[j]);
    }
    row.min_all = m.min();
    row.odd_defect = odd_defect(m);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace fch
