#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "lk/generators.hpp"
#include "lk/lk_process.hpp"

namespace lk {

constexpr std::size_t kMaxControls = 8;
/// Stratified designs are laid out in this many consecutive blocks, each a
/// complete design on its own, so batch means over the blocks are i.i.d.
constexpr std::size_t kDesignBlocks = 16;

/// One replica of (X_{t/2}, X_t) from a fixed start. Dead paths carry 0.
struct SmallTimeDraw {
  double weight = 1.0;
  double x_half = 0.0;
  double x_t = 0.0;
  std::array<double, kMaxControls> controls{};
};

/// Draws conditioned on one stratum of the path space. Controls have mean zero
/// given the draw weight; mc_generator regresses out weight * control.
struct SmallTimeStratum {
  double probability = 1.0;
  std::size_t n_controls = 0;
  /// Draws come in groups of this size (reflected pairs) that batches keep together.
  std::size_t group = 1;
  std::vector<SmallTimeDraw> draws;
};

/// First index of block k when n draws in groups of size group are cut into blocks.
std::size_t block_begin(std::size_t k, std::size_t n, std::size_t blocks, std::size_t group = 1);

struct SmallTimeSample {
  double x = 1.0;
  double t = 1e-3;
  std::vector<SmallTimeStratum> strata;
};

class SmallTimeSampler {
 public:
  virtual ~SmallTimeSampler() = default;
  virtual SmallTimeSample sample(double x, double t, std::size_t n, RngStream& rng) const = 0;
  virtual std::string name() const = 0;
};

/// Symmetric stable process started at x. The angle of the
/// Chambers-Mallows-Stuck map is importance sampled towards its endpoints
/// (large jumps), each draw is paired with its reflection, and X_{t/2}
/// reuses the draw of X_t through self-similarity. Killing within t is
/// ignored; it is o(t).
class DirectStableSampler : public SmallTimeSampler {
 public:
  explicit DirectStableSampler(const StableParams& p, double tilt = 5.0);
  SmallTimeSample sample(double x, double t, std::size_t n, RngStream& rng) const override;
  std::string name() const override { return "direct-stable"; }

 private:
  StableParams p_;
  double tilt_;
};

struct LkSmallTimeOptions {
  /// Jumps below this size are replaced by drift plus Gaussian noise.
  double small_cut = 0.005;
  /// Jumps at least this large count as rare events, like flips.
  double rare_cut = 0.3;
  /// Grid pieces per Y-time horizon h = t |x|^{-alpha}.
  std::size_t pieces_per_h = 64;
  /// Share of draws spent on paths with a rare event in [0, 2h].
  double rare_share = 0.2;
  /// Probability of proposing a flip (rather than a large jump) as the first rare event.
  double flip_share = 0.5;
  std::size_t max_pieces = 100000;
};

/// X_t = Y_{tau(t |x|^{-alpha})} for a Lamperti-Kiu process Y, simulated on
/// the short window directly. The Y path is event driven: flips and jumps
/// happen at their exact times, the remaining motion is linear between grid
/// nodes with Brownian-bridge noise at the inverted time. Paths are split
/// by whether a rare event (flip or jump >= rare_cut) occurs in Y-time
/// [0, 2h]; the rare stratum draws the event time, type and size from
/// stratified uniforms. Every path carries martingale controls of the jump part
/// at tau and of the Gaussian part at the end of the grid piece holding tau.
class LkSmallTimeSampler : public SmallTimeSampler {
 public:
  LkSmallTimeSampler(const LKCharacteristics& chars, double alpha, const LkSmallTimeOptions& opt = {});
  ~LkSmallTimeSampler() override;
  SmallTimeSample sample(double x, double t, std::size_t n, RngStream& rng) const override;
  std::string name() const override { return "lk-time-change"; }

  struct Side;

 private:
  LKCharacteristics chars_;
  double alpha_;
  LkSmallTimeOptions opt_;
  std::unique_ptr<Side> plus_;
  std::unique_ptr<Side> minus_;
};

struct McGeneratorEstimate {
  double estimate = 0.0;  // 2 G(t/2) - G(t)
  double se = 0.0;
  double at_t = 0.0;
  double se_t = 0.0;
  double at_half = 0.0;
  double se_half = 0.0;
  std::size_t n = 0;
};

/// (E_x f(X_t) - f(x)) / t at t and t/2 and their extrapolation, with
/// standard errors from independent batches.
McGeneratorEstimate mc_generator(const TestFunction& f, const SmallTimeSample& sample,
                                 std::size_t batches = kDesignBlocks);
McGeneratorEstimate mc_generator(const TestFunction& f, double x, const SmallTimeSampler& sampler,
                                 double t, std::size_t n, RngStream& rng, std::size_t batches = kDesignBlocks);

/// |x|^{-alpha} K f(x) against the Monte Carlo generator of the time-changed process.
GeneratorReport volkonskii_check(const TestFunction& f, double x, const LKCharacteristics& chars,
                                 double alpha, double t, std::size_t n, RngStream& rng,
                                 const LkSmallTimeOptions& opt = {});

}  // namespace lk
