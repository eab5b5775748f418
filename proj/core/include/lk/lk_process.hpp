#pragma once

#include <cstddef>
#include <vector>

#include "lk/levy_model.hpp"
#include "lk/rng.hpp"
#include "lk/samplers.hpp"

namespace lk {

/// Lamperti-Kiu data: one killed Levy process and flip law per sign.
struct LKCharacteristics {
  SignCharacteristics plus;
  SignCharacteristics minus;

  const SignCharacteristics& of(int sign) const { return sign > 0 ? plus : minus; }
  double q_plus() const { return plus.levy.killing; }
  double q_minus() const { return minus.levy.killing; }
  Regime regime() const { return classify_regime(q_plus(), q_minus()); }
  void validate() const;
};

/// Skeleton of the log process E between flips.
///
/// Segment k lives on [T_k, T_{k+1}) and uses the characteristics of sign
/// start_sign * (-1)^k. offsets[k] is the real part of E at T_k.
struct LogPath {
  int start_sign = 1;
  std::vector<SegmentPath> segments;
  std::vector<double> renewal_times;
  std::vector<double> offsets;
  double horizon = 0.0;

  int segment_sign(std::size_t k) const { return (k % 2 == 0) ? start_sign : -start_sign; }
  /// Index of the segment containing t, i.e. N_t.
  std::size_t flip_count(double t) const;
  /// Re E_t.
  double real_part(double t) const;
  /// Sign of Y_t relative to the start, start_sign * (-1)^{N_t}.
  int sign_at(double t) const;
  /// Number of completed (uncensored) segments.
  std::size_t completed_segments() const;
};

/// Simulates LogPaths with cached segment samplers.
///
/// Segment k of a path is drawn from root.split(k), so paths simulated with a
/// longer horizon extend shorter ones with the same root stream.
class LKSimulator {
 public:
  LKSimulator(const LKCharacteristics& chars, const SamplerConfig& cfg = {});

  LogPath simulate(int start_sign, double horizon, double step, const RngStream& root) const;
  /// Simulates exactly n complete segments (all killing rates must be positive).
  LogPath simulate_segments(int start_sign, std::size_t n, double step, const RngStream& root) const;

  SegmentPath segment(int start_sign, std::size_t k, double step, double horizon_cap,
                      const RngStream& root) const;

  const LKCharacteristics& characteristics() const { return chars_; }
  const SegmentSampler& sampler(int sign) const { return sign > 0 ? plus_ : minus_; }
  const SamplerConfig& config() const { return cfg_; }

 private:
  LKCharacteristics chars_;
  SamplerConfig cfg_;
  SegmentSampler plus_;
  SegmentSampler minus_;
};

/// Free-function form; consumes one draw of rng to derive the path's root stream.
LogPath simulate_log_path(const LKCharacteristics& chars, int start_sign, double horizon,
                          const GridSpec& grid, RngStream& rng, const SamplerConfig& cfg = {});

/// Y_t = x exp(Re E_t) (-1)^{N_t}.
double evaluate_Y(const LogPath& path, double x, double t);

/// Two-state sign chain with departure rates q+ (from +1) and q- (from -1).
struct SignChain {
  double q_plus = 0.0;
  double q_minus = 0.0;
  int start_sign = 1;
};

/// Probability of being at -start_sign at time t.
double flip_probability(const SignChain& chain, double t);

/// Result of applying the scaling identity {aY, P_x} = {sgn(a) Y, P_{|a| x}}.
///
/// The same LogPath evaluated from start_value and multiplied by outer_sign
/// reproduces a * Y^{(x)}. A path started at a*x itself with a < 0 needs a
/// fresh simulation from the opposite sign and agrees with a * Y^{(x)} only in
/// law, and only for sign-symmetric characteristics.
struct ScaledStart {
  double start_value = 0.0;
  int outer_sign = 1;
  bool reuse_path = true;
};

ScaledStart scale_path(const LogPath& path, double x, double a);

}  // namespace lk
