#include "lk/lk_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lk/errors.hpp"

namespace lk {

void LKCharacteristics::validate() const {
  plus.levy.validate();
  minus.levy.validate();
  if (!std::isfinite(q_plus()) || !std::isfinite(q_minus()))
    throw ParameterError("flip rates must be finite");
}

std::size_t LogPath::flip_count(double t) const {
  auto it = std::upper_bound(renewal_times.begin(), renewal_times.end(), t);
  std::size_t n = static_cast<std::size_t>(std::distance(renewal_times.begin(), it));
  return n == 0 ? 0 : n - 1;
}

double LogPath::real_part(double t) const {
  std::size_t k = flip_count(t);
  const auto& seg = segments[k];
  const double t0 = renewal_times[k];
  auto it = std::upper_bound(seg.times.begin(), seg.times.end(), t - t0);
  std::size_t j = it == seg.times.begin() ? 0 : static_cast<std::size_t>(it - seg.times.begin()) - 1;
  // Node times are t0 + times[j] globally; resolve against those so a
  // query exactly at a node is right-continuous.
  while (j + 1 < seg.times.size() && t0 + seg.times[j + 1] <= t) ++j;
  while (j > 0 && t0 + seg.times[j] > t) --j;
  return offsets[k] + seg.values[j];
}

int LogPath::sign_at(double t) const {
  return segment_sign(flip_count(t));
}

std::size_t LogPath::completed_segments() const {
  std::size_t n = 0;
  for (const auto& s : segments) {
    if (!s.censored) ++n;
  }
  return n;
}

LKSimulator::LKSimulator(const LKCharacteristics& chars, const SamplerConfig& cfg)
    : chars_(chars),
      cfg_(cfg),
      plus_(chars.plus.levy, chars.plus.jump, cfg),
      minus_(chars.minus.levy, chars.minus.jump, cfg) {
  chars_.validate();
}

SegmentPath LKSimulator::segment(int start_sign, std::size_t k, double step, double horizon_cap,
                                 const RngStream& root) const {
  int s = (k % 2 == 0) ? start_sign : -start_sign;
  RngStream rng = root.split(k);
  return sampler(s).sample(step, horizon_cap, rng);
}

LogPath LKSimulator::simulate(int start_sign, double horizon, double step,
                              const RngStream& root) const {
  if (start_sign != 1 && start_sign != -1) throw ParameterError("start sign must be +1 or -1");
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  if (!(step > 0.0)) throw ParameterError("step must be positive");
  LogPath path;
  path.start_sign = start_sign;
  path.horizon = horizon;
  double t = 0.0;
  double offset = 0.0;
  for (std::size_t k = 0;; ++k) {
    SegmentPath seg = segment(start_sign, k, step, horizon - t, root);
    path.renewal_times.push_back(t);
    path.offsets.push_back(offset);
    bool last = seg.censored || t + seg.lifetime >= horizon;
    double life = seg.lifetime;
    offset += seg.terminal_value + seg.flip_jump;
    path.segments.push_back(std::move(seg));
    if (last) {
      path.segments.back().censored = true;
      break;
    }
    t += life;
  }
  return path;
}

LogPath LKSimulator::simulate_segments(int start_sign, std::size_t n, double step,
                                       const RngStream& root) const {
  if (start_sign != 1 && start_sign != -1) throw ParameterError("start sign must be +1 or -1");
  if (n == 0) throw ParameterError("need at least one segment");
  if (!(chars_.q_plus() > 0.0) || !(chars_.q_minus() > 0.0))
    throw Unsupported("segment-count simulation needs positive flip rates on both sides");
  LogPath path;
  path.start_sign = start_sign;
  double t = 0.0;
  double offset = 0.0;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    SegmentPath seg = segment(start_sign, k, step, kInf, root);
    path.renewal_times.push_back(t);
    path.offsets.push_back(offset);
    t += seg.lifetime;
    offset += seg.terminal_value + seg.flip_jump;
    path.segments.push_back(std::move(seg));
  }
  path.horizon = t;
  return path;
}

LogPath simulate_log_path(const LKCharacteristics& chars, int start_sign, double horizon,
                          const GridSpec& grid, RngStream& rng, const SamplerConfig& cfg) {
  grid.validate();
  LKSimulator sim(chars, cfg);
  RngStream root = rng.split(rng.bits());
  return sim.simulate(start_sign, horizon, grid.step, root);
}

double evaluate_Y(const LogPath& path, double x, double t) {
  if (x == 0.0) throw DomainError("start value must be nonzero");
  if ((x > 0.0 ? 1 : -1) != path.start_sign)
    throw DomainError("start value sign does not match the path");
  if (!(t >= 0.0) || t > path.horizon) throw RangeError("time outside the simulated horizon");
  std::size_t k = path.flip_count(t);
  double y = x * std::exp(path.real_part(t));
  return (k % 2 == 0) ? y : -y;
}

double flip_probability(const SignChain& chain, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  if (chain.q_plus < 0.0 || chain.q_minus < 0.0) throw ParameterError("rates must be nonnegative");
  double qs = chain.start_sign > 0 ? chain.q_plus : chain.q_minus;
  double total = chain.q_plus + chain.q_minus;
  if (total == 0.0) return 0.0;
  return qs / total * -std::expm1(-total * t);
}

ScaledStart scale_path(const LogPath& path, double x, double a) {
  if (a == 0.0 || x == 0.0) throw DomainError("scale and start value must be nonzero");
  if ((x > 0.0 ? 1 : -1) != path.start_sign)
    throw DomainError("start value sign does not match the path");
  return ScaledStart{std::abs(a) * x, a > 0.0 ? 1 : -1, true};
}

}  // namespace lk
