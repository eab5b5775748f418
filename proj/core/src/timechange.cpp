#include "lk/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lk/errors.hpp"

namespace lk {

SampledPath SampledPath::from(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size()) throw ParameterError("times and values differ in length");
  SampledPath p;
  p.times = std::move(times);
  p.values = std::move(values);
  p.rebuild_flips();
  return p;
}

void SampledPath::rebuild_flips() {
  flip_indices.clear();
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i] * values[i + 1] < 0.0) flip_indices.push_back(i);
  }
}

// ---------------------------------------------------------------------------

ExponentialFunctional::ExponentialFunctional(const LogPath& path, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  std::size_t total = 1;
  for (const auto& seg : path.segments) total += seg.times.size() - 1;
  nodes_.reserve(total);
  acc_.reserve(total);
  rate_.reserve(total);
  nodes_.push_back(0.0);
  acc_.push_back(0.0);
  double a = 0.0;
  for (std::size_t k = 0; k < path.segments.size(); ++k) {
    const auto& seg = path.segments[k];
    const double t0 = path.renewal_times[k];
    const double off = path.offsets[k];
    for (std::size_t j = 0; j + 1 < seg.times.size(); ++j) {
      double r = std::exp(alpha * (off + seg.values[j]));
      double dt = seg.times[j + 1] - seg.times[j];
      a += r * dt;
      rate_.push_back(r);
      nodes_.push_back(t0 + seg.times[j + 1]);
      acc_.push_back(a);
      max_rate_ = std::max(max_rate_, r);
    }
  }
  rate_.push_back(rate_.empty() ? 1.0 : rate_.back());
}

double ExponentialFunctional::value(double s) const {
  if (s <= 0.0) return 0.0;
  if (s > nodes_.back() * (1.0 + 1e-14)) throw RangeError("time outside the simulated horizon");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
  std::size_t j = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
  if (j + 1 >= nodes_.size()) return acc_.back();
  return acc_[j] + rate_[j] * (s - nodes_[j]);
}

double ExponentialFunctional::inverse(double a) const {
  if (a < 0.0) throw DomainError("time must be nonnegative");
  if (a >= acc_.back()) throw HorizonExhausted("time change needs a longer Y horizon");
  auto it = std::upper_bound(acc_.begin(), acc_.end(), a);
  std::size_t j = static_cast<std::size_t>(std::distance(acc_.begin(), it)) - 1;
  return nodes_[j] + (a - acc_[j]) / rate_[j];
}

double functional_A(const LogPath& path, double alpha, double t) {
  return ExponentialFunctional(path, alpha).value(t);
}

double inverse_tau(const LogPath& path, double alpha, double t) {
  return ExponentialFunctional(path, alpha).inverse(t);
}

// ---------------------------------------------------------------------------

TimeChangedPath y_to_x(std::shared_ptr<const LogPath> path, double x, double alpha,
                       const std::vector<double>& t_grid) {
  if (!path) throw ParameterError("missing LogPath");
  if (x == 0.0) throw DomainError("start value must be nonzero");
  if ((x > 0.0 ? 1 : -1) != path->start_sign)
    throw DomainError("start value sign does not match the path");
  ExponentialFunctional A(*path, alpha);
  const double scale = std::pow(std::abs(x), -alpha);
  std::vector<double> values;
  values.reserve(t_grid.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (t < prev) throw ParameterError("X-time grid must be increasing");
    prev = t;
    double s = A.inverse(t * scale);
    values.push_back(evaluate_Y(*path, x, s));
  }
  TimeChangedPath out;
  out.source = std::move(path);
  out.x = x;
  out.alpha = alpha;
  out.table_s = A.nodes();
  out.table_A = A.accumulated();
  out.samples = SampledPath::from(t_grid, std::move(values));
  return out;
}

namespace {

// Forward clock B(t_i) = sum_{j<i} (t_{j+1} - t_j) |X_j|^{-alpha}.
std::vector<double> forward_clock(const SampledPath& xpath, double alpha) {
  if (xpath.size() < 2) throw ConfigError("degenerate grid: need at least two points");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  std::vector<double> b(xpath.size(), 0.0);
  for (std::size_t i = 0; i + 1 < xpath.size(); ++i) {
    double dt = xpath.times[i + 1] - xpath.times[i];
    if (!(dt > 0.0)) throw ConfigError("degenerate grid: times must increase");
    double v = xpath.values[i];
    if (v == 0.0) throw DomainError("X path must not vanish");
    b[i + 1] = b[i] + dt * std::pow(std::abs(v), -alpha);
  }
  return b;
}

}  // namespace

std::vector<double> additive_clock(const SampledPath& xpath, double alpha,
                                   const std::vector<double>& s_points) {
  auto b = forward_clock(xpath, alpha);
  std::vector<double> out;
  out.reserve(s_points.size());
  std::size_t i = 0;
  for (double s : s_points) {
    if (s >= b.back()) throw HorizonExhausted("Y time beyond the X path");
    while (i + 1 < b.size() && b[i + 1] <= s) ++i;
    double rate = std::pow(std::abs(xpath.values[i]), alpha);
    out.push_back(xpath.times[i] + (s - b[i]) * rate);
  }
  return out;
}

SampledPath x_to_y(const SampledPath& xpath, double alpha, double y_step) {
  auto b = forward_clock(xpath, alpha);
  if (y_step <= 0.0) y_step = b[1];
  std::vector<double> times, values;
  std::size_t i = 0;
  for (std::size_t j = 0;; ++j) {
    double s = static_cast<double>(j) * y_step;
    if (s >= b.back()) break;
    while (i + 1 < b.size() && b[i + 1] <= s) ++i;
    times.push_back(s);
    values.push_back(xpath.values[i]);
  }
  return SampledPath::from(std::move(times), std::move(values));
}

RoundTripReport round_trip_check(std::shared_ptr<const LogPath> path, double x, double alpha, double delta,
                                 double window) {
  if (!path) throw ParameterError("missing LogPath");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  ExponentialFunctional A(*path, alpha);
  const double scale = std::pow(std::abs(x), alpha);
  window = std::min(window, A.horizon());
  std::vector<double> nodes, t_grid;
  double sup = 0.0;
  for (double s : A.nodes()) {
    if (s > window) break;
    double t = scale * A.value(s);
    if (!t_grid.empty() && !(t > t_grid.back())) continue;
    nodes.push_back(s);
    t_grid.push_back(t);
    sup = std::max(sup, std::pow(std::abs(evaluate_Y(*path, x, s)), alpha));
  }
  if (t_grid.size() < 3) throw ConfigError("degenerate grid: window holds fewer than three nodes");
  // The last sample only closes the final cell and is not revisited.
  t_grid.back() = std::nextafter(t_grid.back(), 0.0);
  auto xpath = y_to_x(path, x, alpha, t_grid).samples;
  auto ypath = x_to_y(xpath, alpha, delta);

  RoundTripReport rep;
  rep.bound = 5.0 * delta * sup;
  std::vector<double> s_points(ypath.times.begin(), ypath.times.end() - 1);
  auto nu = additive_clock(xpath, alpha, s_points);
  for (std::size_t k = 0; k < s_points.size(); ++k) {
    double s = s_points[k];
    rep.clock_error = std::max(rep.clock_error, std::abs(nu[k] - scale * A.value(s)));
    auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
    std::size_t i = static_cast<std::size_t>(std::distance(nodes.begin(), it)) - 1;
    bool ok = false;
    for (std::size_t j = (i ? i - 1 : 0); j <= std::min(i + 1, nodes.size() - 1); ++j)
      ok = ok || ypath.values[k] == xpath.values[j];
    if (!ok) ++rep.value_mismatches;
  }
  rep.points = s_points.size();
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double segment_exponential_integral(const SegmentPath& seg, double alpha) {
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < seg.times.size(); ++j) {
    total += (seg.times[j + 1] - seg.times[j]) * std::exp(alpha * seg.values[j]);
  }
  return total;
}

struct HittingAccumulator {
  double scale;
  double alpha;
  double tol;
  double offset = 0.0;
  HittingTimeEstimate est;

  // Returns true once converged.
  bool add(const SegmentPath& seg) {
    double inc = scale * std::exp(alpha * offset) * segment_exponential_integral(seg, alpha);
    est.estimate += inc;
    est.partial_sums.push_back(est.estimate);
    est.terms += 1;
    offset += seg.terminal_value + seg.flip_jump;
    if (est.terms > 1 && inc < tol * est.estimate) est.converged = true;
    return est.converged;
  }
};

}  // namespace

HittingTimeEstimate hitting_time(const LogPath& path, double x, double alpha, std::size_t n_max,
                                 double tol) {
  if (x == 0.0) throw DomainError("start value must be nonzero");
  HittingAccumulator acc{std::pow(std::abs(x), alpha), alpha, tol, 0.0, {}};
  for (const auto& seg : path.segments) {
    if (seg.censored || acc.est.terms >= n_max) break;
    if (acc.add(seg)) break;
  }
  return acc.est;
}

HittingTimeEstimate hitting_time(const LKSimulator& sim, double x, double alpha, double step,
                                 const RngStream& root, std::size_t n_max, double tol) {
  if (x == 0.0) throw DomainError("start value must be nonzero");
  if (sim.characteristics().regime() != Regime::C4)
    throw Unsupported("hitting time needs positive flip rates on both sides");
  const int sign = x > 0.0 ? 1 : -1;
  HittingAccumulator acc{std::pow(std::abs(x), alpha), alpha, tol, 0.0, {}};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_max; ++k) {
    if (acc.add(sim.segment(sign, k, step, kInf, root))) break;
  }
  return acc.est;
}

std::vector<double> sample_x_marginals(const LKSimulator& sim, double x, double alpha,
                                       const std::vector<double>& times, double step,
                                       const RngStream& root, const MarginalOptions& opt) {
  if (x == 0.0) throw DomainError("start value must be nonzero");
  if (!std::is_sorted(times.begin(), times.end())) throw ParameterError("times must be increasing");
  const int sign = x > 0.0 ? 1 : -1;
  const double scale = std::pow(std::abs(x), -alpha);
  double horizon = std::max(opt.initial_horizon, step);
  for (;;) {
    LogPath path = sim.simulate(sign, horizon, step, root);
    ExponentialFunctional A(path, alpha);
    const bool enough = times.empty() || times.back() * scale < A.total();
    const bool dead = std::exp(path.real_part(horizon)) < opt.kill_level;
    if (enough || dead) {
      std::vector<double> out;
      out.reserve(times.size());
      for (double t : times) {
        double target = t * scale;
        out.push_back(target < A.total() ? evaluate_Y(path, x, A.inverse(target)) : 0.0);
      }
      return out;
    }
    horizon *= 2.0;
    if (horizon > opt.max_horizon)
      throw HorizonExhausted("X marginal needs a Y horizon beyond the configured maximum");
  }
}

}  // namespace lk
