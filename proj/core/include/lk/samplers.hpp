#pragma once

#include <cstddef>
#include <vector>

#include "lk/levy_model.hpp"
#include "lk/rng.hpp"

namespace lk {

struct GridSpec {
  double step = 1e-2;
  double horizon = 1.0;

  static GridSpec make(double step, double horizon);
  void validate() const;
  /// ceil(horizon / step) + 1
  std::size_t points() const;
};

// ---------------------------------------------------------------------------
// Elementary draws

/// Chambers-Mallows-Stuck map. v is the angle in (-pi/2, pi/2), w > 0 an
/// exponential variate. Returns a draw with exponent dt * psi.
double stable_from_angle(const StableParams& p, double dt, double v, double w);

/// Exact stable increment over dt.
double stable_increment(const StableParams& p, double dt, RngStream& rng);

/// Normal with mean drift*dt and variance dt.
double gaussian_increment(double drift, double dt, RngStream& rng);

double sample_jump(const JumpLaw& law, RngStream& rng);

// ---------------------------------------------------------------------------
// Jump tables and small-jump approximation

/// Inverse-CDF table of pi restricted to lo <= |y| < hi (hi may be infinite),
/// built from a geometric grid in |y| with monotone interpolation.
class JumpTable {
 public:
  JumpTable() = default;
  JumpTable(const MeasureSpec& m, double lo, double hi, double cell_width = 4e-3);

  /// Total mass of the restricted measure.
  double rate() const { return pos_mass_ + neg_mass_; }
  double positive_rate() const { return pos_mass_; }
  /// Jump size for u uniform on [0, 1).
  double sample(double u) const;
  bool empty() const { return rate() <= 0.0; }

 private:
  struct Side {
    std::vector<double> log_y;
    std::vector<double> cdf;
    double sample(double target) const;
  };
  Side build(const MeasureSpec& m, int sign, double lo, double hi, double cell_width);

  Side pos_;
  Side neg_;
  double pos_mass_ = 0.0;
  double neg_mass_ = 0.0;
};

struct SamplerConfig {
  /// Jumps with |y| >= epsilon are simulated exactly; smaller ones are replaced
  /// by drift plus optional Gaussian variance matching.
  double epsilon = 1e-3;
  bool variance_matching = true;
};

/// Drift and Gaussian scale of the process once jumps below epsilon are removed.
struct SmallJumpApprox {
  double drift = 0.0;
  double sigma = 0.0;
  double small_variance = 0.0;
};

SmallJumpApprox small_jump_approx(const LevySpec& spec, double epsilon, bool variance_matching);

/// Stationary increments of an (unkilled) Levy process.
class LevySampler {
 public:
  enum class Mode { Gaussian, Stable, CompoundPoisson };

  LevySampler() = default;
  LevySampler(const LevySpec& spec, const SamplerConfig& cfg = {});

  Mode mode() const { return mode_; }
  double increment(double dt, RngStream& rng) const;
  double drift() const { return approx_.drift; }
  double sigma() const { return approx_.sigma; }
  double jump_rate() const { return table_.rate(); }
  const JumpTable& table() const { return table_; }
  const SmallJumpApprox& approx() const { return approx_; }
  const StableParams& stable() const { return stable_; }

 private:
  Mode mode_ = Mode::Gaussian;
  SmallJumpApprox approx_;
  JumpTable table_;
  StableParams stable_;
};

// ---------------------------------------------------------------------------
// Killed segments

struct SegmentPath {
  std::vector<double> times;   // times[0] = 0, last entry = min(lifetime, horizon)
  std::vector<double> values;  // xi at those times, values[0] = 0
  double lifetime = 0.0;
  double terminal_value = 0.0;
  double flip_jump = 0.0;
  bool censored = false;

  /// End of the represented window.
  double end() const { return times.back(); }
  /// Piecewise-constant evaluation on [0, end()].
  double value_at(double s) const;
};

/// Samples killed segments of one Levy process; tables are built once.
class SegmentSampler {
 public:
  SegmentSampler() = default;
  SegmentSampler(const LevySpec& spec, const JumpLaw& law, const SamplerConfig& cfg = {});

  /// Draw order: lifetime, flip jump, then increments on the grid.
  SegmentPath sample(double step, double horizon, RngStream& rng) const;

  const LevySpec& spec() const { return spec_; }
  const JumpLaw& law() const { return law_; }
  const LevySampler& levy() const { return levy_; }

 private:
  LevySpec spec_;
  JumpLaw law_ = Degenerate{0.0};
  LevySampler levy_;
};

SegmentPath sample_killed_segment(const LevySpec& spec, const GridSpec& grid, const JumpLaw& law,
                                  RngStream& rng, const SamplerConfig& cfg = {});

}  // namespace lk
