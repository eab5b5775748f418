#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lk/lk_process.hpp"
#include "lk/timechange.hpp"

namespace lk {

enum class Flavor { KilledAtZero, ConditionedAvoidZero, Brownian };

const char* flavor_name(Flavor f);

struct StableModel {
  StableParams params;
  Flavor flavor = Flavor::KilledAtZero;

  void validate() const;

  /// Named presets: stable-killed-sym-1.5, stable-cond-1.5, brownian,
  /// stable-killed-asym-1.5 (c+ = 1, c- = 0.5).
  static StableModel preset(const std::string& name);
  static std::vector<std::string> preset_names();
};

/// Brownian flavor: xi = B -/+ t/2 on the killed/conditioned side, no flips.
LKCharacteristics brownian_characteristics(bool conditioned = false);

LKCharacteristics build_lk(const StableModel& model);

/// Euler sum of exact stable increments on a uniform grid starting at x0.
/// Exact zeros are replaced by the smallest subnormal with the previous sign;
/// zero_replacements (if given) receives their count.
SampledPath simulate_stable_direct(const StableParams& p, double x0, const GridSpec& grid, RngStream& rng,
                                   std::size_t* zero_replacements = nullptr);

/// One sign change of a directly simulated path.
struct FlipEvent {
  double time = 0.0;    // left grid point H_n
  double before = 0.0;  // X_{H_n-}
  double after = 0.0;   // X_{H_n}
  double clock = 0.0;   // int |X|^{-alpha} du since the previous flip (or the start)
};

struct SelfSimilarOptions {
  /// Clock step: the time step at state X is h |X|^alpha.
  double h = 1e-4;
  std::size_t max_flips = 8;
  std::size_t max_steps = 200000000;
};

struct FlipSequence {
  double x0 = 1.0;
  std::vector<FlipEvent> flips;
  std::size_t steps = 0;
  bool complete = false;
};

/// Direct stable path with self-similar stepping, run until max_flips sign
/// changes. Each step spends exactly h units of the additive clock
/// int |X|^{-alpha} du, so flips are resolved uniformly in the scale of |X|.
FlipSequence simulate_stable_flips(const StableParams& p, double x0, const SelfSimilarOptions& opt,
                                   RngStream& rng);

/// h(x_to) / h(x_from); 0 when x_to = 0 (the killed path is dead).
double h_transform_weight(const StableModel& model, double x_from, double x_to, double t = 0.0);

}  // namespace lk
