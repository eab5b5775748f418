#include "lk/stable_models.hpp"

#include <cmath>
#include <limits>

#include "lk/errors.hpp"

namespace lk {

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::KilledAtZero:
      return "killed";
    case Flavor::ConditionedAvoidZero:
      return "conditioned";
    case Flavor::Brownian:
      return "brownian";
  }
  return "?";
}

void StableModel::validate() const {
  params.validate();
  switch (flavor) {
    case Flavor::KilledAtZero:
      if (!(params.alpha < 2.0)) throw ParameterError("killed flavor needs alpha in (0, 2)");
      break;
    case Flavor::ConditionedAvoidZero:
      if (!(params.alpha > 1.0 && params.alpha < 2.0))
        throw ParameterError("conditioned flavor needs alpha in (1, 2)");
      break;
    case Flavor::Brownian:
      if (params.alpha != 2.0) throw ParameterError("Brownian flavor fixes alpha = 2");
      break;
  }
}

StableModel StableModel::preset(const std::string& name) {
  if (name == "stable-killed-sym-1.5")
    return {StableParams::symmetric_normalized(1.5), Flavor::KilledAtZero};
  if (name == "stable-cond-1.5")
    return {StableParams::symmetric_normalized(1.5), Flavor::ConditionedAvoidZero};
  if (name == "stable-killed-asym-1.5")
    return {StableParams::make(1.5, 1.0, 0.5), Flavor::KilledAtZero};
  if (name == "brownian") return {StableParams::make(2.0, 0.5, 0.5), Flavor::Brownian};
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> StableModel::preset_names() {
  return {"stable-killed-sym-1.5", "stable-cond-1.5", "stable-killed-asym-1.5", "brownian"};
}

LKCharacteristics brownian_characteristics(bool conditioned) {
  SignCharacteristics s;
  s.levy.linear = conditioned ? 0.5 : -0.5;
  s.levy.gaussian = 1.0;
  s.levy.killing = 0.0;
  s.jump = Degenerate{0.0};
  return {s, s};
}

LKCharacteristics build_lk(const StableModel& model) {
  model.validate();
  switch (model.flavor) {
    case Flavor::KilledAtZero:
      return {killed_stable_characteristics(model.params, 1),
              killed_stable_characteristics(model.params, -1)};
    case Flavor::ConditionedAvoidZero:
      return {conditioned_stable_characteristics(model.params, 1),
              conditioned_stable_characteristics(model.params, -1)};
    case Flavor::Brownian:
      return brownian_characteristics(false);
  }
  throw ParameterError("unknown flavor");
}

namespace {

double step_increment(const StableParams& p, double dt, RngStream& rng) {
  if (p.brownian()) return gaussian_increment(0.0, dt, rng);
  return stable_increment(p, dt, rng);
}

}  // namespace

SampledPath simulate_stable_direct(const StableParams& p, double x0, const GridSpec& grid, RngStream& rng,
                                   std::size_t* zero_replacements) {
  p.validate();
  grid.validate();
  if (x0 == 0.0) throw DomainError("start value must be nonzero");
  const std::size_t n = grid.points();
  std::vector<double> times(n), values(n);
  std::size_t zeros = 0;
  times[0] = 0.0;
  values[0] = x0;
  for (std::size_t i = 1; i < n; ++i) {
    double t = std::min(static_cast<double>(i) * grid.step, grid.horizon);
    times[i] = t;
    double v = values[i - 1] + step_increment(p, t - times[i - 1], rng);
    if (v == 0.0) {
      v = std::copysign(std::numeric_limits<double>::denorm_min(), values[i - 1]);
      ++zeros;
    }
    values[i] = v;
  }
  if (zero_replacements) *zero_replacements = zeros;
  return SampledPath::from(std::move(times), std::move(values));
}

FlipSequence simulate_stable_flips(const StableParams& p, double x0, const SelfSimilarOptions& opt,
                                   RngStream& rng) {
  p.validate();
  if (p.brownian()) throw Unsupported("Brownian paths do not change sign by jumps");
  if (x0 == 0.0) throw DomainError("start value must be nonzero");
  if (!(opt.h > 0.0)) throw ParameterError("clock step must be positive");
  FlipSequence out;
  out.x0 = x0;
  double x = x0;
  double t = 0.0;
  std::size_t since = 0;
  // Unit-clock increments are rescaled: X + |X| * S_h with S_h a draw over time h.
  const double a = p.alpha;
  while (out.flips.size() < opt.max_flips && out.steps < opt.max_steps) {
    double dt = opt.h * std::pow(std::abs(x), a);
    double next = x + std::abs(x) * stable_increment(p, opt.h, rng);
    ++out.steps;
    ++since;
    if (next == 0.0) next = std::copysign(std::numeric_limits<double>::denorm_min(), x);
    if (next * x < 0.0) {
      out.flips.push_back({t, x, next, opt.h * static_cast<double>(since)});
      since = 0;
    }
    t += dt;
    x = next;
  }
  out.complete = out.flips.size() >= opt.max_flips;
  return out;
}

double h_transform_weight(const StableModel& model, double x_from, double x_to, double) {
  if (model.flavor != Flavor::ConditionedAvoidZero)
    throw ParameterError("h-transform weights apply to the conditioned flavor");
  if (x_from == 0.0) throw DomainError("start value must be nonzero");
  if (x_to == 0.0) return 0.0;
  return h_function(model.params, x_to) / h_function(model.params, x_from);
}

}  // namespace lk
