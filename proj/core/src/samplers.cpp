#include "lk/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "lk/errors.hpp"

namespace lk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

GridSpec GridSpec::make(double step, double horizon) {
  GridSpec g{step, horizon};
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (!(step > 0.0)) throw ParameterError("grid step must be positive");
  if (!(horizon > 0.0)) throw ParameterError("grid horizon must be positive");
  if (step > horizon) throw ParameterError("grid step must not exceed the horizon");
}

std::size_t GridSpec::points() const {
  return static_cast<std::size_t>(std::ceil(horizon / step - 1e-12)) + 1;
}

// ---------------------------------------------------------------------------

double stable_from_angle(const StableParams& p, double dt, double v, double w) {
  const double al = p.alpha;
  if (al == 1.0) return p.c() * dt * std::tan(v);
  const double t = std::tan(kPi * al / 2.0);
  const double beta = p.beta();
  double x;
  if (beta == 0.0) {
    x = std::sin(al * v) / std::pow(std::cos(v), 1.0 / al) *
        std::pow(std::cos(v - al * v) / w, (1.0 - al) / al);
  } else {
    const double b = std::atan(beta * t) / al;
    const double s = std::pow(1.0 + beta * beta * t * t, 1.0 / (2.0 * al));
    x = s * std::sin(al * (v + b)) / std::pow(std::cos(v), 1.0 / al) *
        std::pow(std::cos(v - al * (v + b)) / w, (1.0 - al) / al);
  }
  return std::pow(p.c() * dt, 1.0 / al) * x;
}

double stable_increment(const StableParams& p, double dt, RngStream& rng) {
  p.validate();
  if (p.alpha == 2.0) throw ParameterError("alpha = 2: use gaussian_increment");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  double v = kPi * (rng.uniform_open() - 0.5);
  double w = -std::log(rng.uniform_open());
  return stable_from_angle(p, dt, v, w);
}

double gaussian_increment(double drift, double dt, RngStream& rng) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  return drift * dt + std::sqrt(dt) * rng.normal();
}

double sample_jump(const JumpLaw& law, RngStream& rng) {
  if (const auto* c = std::get_if<LogParetoCond>(&law)) {
    return -jump_quantile(LogParetoZero{c->alpha}, rng.uniform());
  }
  if (const auto* d = std::get_if<Degenerate>(&law)) return d->value;
  return jump_quantile(law, rng.uniform());
}

// ---------------------------------------------------------------------------
// JumpTable

JumpTable::Side JumpTable::build(const MeasureSpec& m, int sign, double lo, double hi,
                                 double cell_width) {
  Side side;
  auto [slo, shi] = measure_support(m);
  double edge = sign > 0 ? shi : -slo;
  if (edge <= 0.0) return side;
  hi = std::min(hi, edge);
  if (!(hi > lo)) return side;

  auto density = [&](double z) { return levy_density(m, sign * z); };
  if (std::isinf(hi)) {
    // Cut the table where the remaining tail is negligible.
    double total = measure_integral(m, [](double) { return 1.0; }, sign > 0 ? lo : -kInf,
                                    sign > 0 ? kInf : -lo);
    double y = std::max(1.0, 2.0 * lo);
    for (int it = 0; it < 60; ++it) {
      double tail = measure_integral(m, [](double) { return 1.0; }, sign > 0 ? y : -kInf,
                                     sign > 0 ? kInf : -y);
      if (tail <= 1e-14 * total) break;
      y *= 1.5;
    }
    hi = y;
  }
  const double span = std::log(hi / lo);
  const std::size_t cells = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(span / cell_width)));
  side.log_y.resize(cells + 1);
  side.cdf.assign(cells + 1, 0.0);
  using GL = boost::math::quadrature::gauss<double, 10>;
  for (std::size_t j = 0; j <= cells; ++j) {
    side.log_y[j] = std::log(lo) + span * static_cast<double>(j) / static_cast<double>(cells);
  }
  side.log_y.back() = std::log(hi);
  for (std::size_t j = 0; j < cells; ++j) {
    // Integrate in s = log|y|: the mass element is y pi(y) ds.
    double part = GL::integrate(
        [&](double s) {
          double z = std::exp(s);
          return z * density(z);
        },
        side.log_y[j], side.log_y[j + 1]);
    side.cdf[j + 1] = side.cdf[j] + part;
  }
  return side;
}

double JumpTable::Side::sample(double target) const {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  std::size_t j = static_cast<std::size_t>(std::distance(cdf.begin(), it));
  j = std::clamp<std::size_t>(j, 1, cdf.size() - 1) - 1;
  double width = cdf[j + 1] - cdf[j];
  double frac = width > 0.0 ? (target - cdf[j]) / width : 0.0;
  frac = std::clamp(frac, 0.0, 1.0);
  return std::exp(log_y[j] + frac * (log_y[j + 1] - log_y[j]));
}

JumpTable::JumpTable(const MeasureSpec& m, double lo, double hi, double cell_width) {
  if (!(lo > 0.0)) throw ConfigError("jump table needs a positive truncation level");
  if (is_zero_measure(m) || !(hi > lo)) return;
  pos_ = build(m, +1, lo, hi, cell_width);
  neg_ = build(m, -1, lo, hi, cell_width);
  pos_mass_ = pos_.cdf.empty() ? 0.0 : pos_.cdf.back();
  neg_mass_ = neg_.cdf.empty() ? 0.0 : neg_.cdf.back();
}

double JumpTable::sample(double u) const {
  double target = u * rate();
  if (target < pos_mass_) return pos_.sample(target);
  return -neg_.sample(std::min(target - pos_mass_, neg_mass_));
}

// ---------------------------------------------------------------------------
// Small jumps

SmallJumpApprox small_jump_approx(const LevySpec& spec, double epsilon, bool variance_matching) {
  SmallJumpApprox out;
  out.drift = spec.linear;
  out.sigma = spec.gaussian;
  if (is_zero_measure(spec.measure)) return out;
  if (!(epsilon > 0.0))
    throw ConfigError("an infinite-activity measure needs a positive truncation level");
  const auto& m = spec.measure;
  auto l = [](double y) { return compensator(y); };
  auto y_minus_l = [](double y) { return y - compensator(y); };
  auto y2 = [](double y) { return y * y; };
  double big_comp = measure_integral(m, l, -kInf, -epsilon) + measure_integral(m, l, epsilon, kInf);
  double small_shift = measure_integral(m, y_minus_l, -epsilon, 0.0) +
                       measure_integral(m, y_minus_l, 0.0, epsilon);
  out.small_variance = measure_integral(m, y2, -epsilon, 0.0) + measure_integral(m, y2, 0.0, epsilon);
  out.drift = spec.linear - big_comp + small_shift;
  double var = spec.gaussian * spec.gaussian + (variance_matching ? out.small_variance : 0.0);
  out.sigma = std::sqrt(var);
  return out;
}

LevySampler::LevySampler(const LevySpec& spec, const SamplerConfig& cfg) {
  spec.validate();
  if (is_zero_measure(spec.measure)) {
    mode_ = Mode::Gaussian;
    approx_ = small_jump_approx(spec, cfg.epsilon, cfg.variance_matching);
    return;
  }
  if (const auto* sd = std::get_if<StableDensity>(&spec.measure)) {
    mode_ = Mode::Stable;
    stable_ = sd->params;
    // Switch from the stable compensator y 1{|y|<1} to l(y).
    auto diff = [](double y) { return (std::abs(y) < 1.0 ? y : 0.0) - compensator(y); };
    double shift = measure_integral(spec.measure, diff, -kInf, 0.0) +
                   measure_integral(spec.measure, diff, 0.0, kInf);
    approx_.drift = spec.linear - stable_.a() + shift;
    approx_.sigma = spec.gaussian;
    return;
  }
  mode_ = Mode::CompoundPoisson;
  approx_ = small_jump_approx(spec, cfg.epsilon, cfg.variance_matching);
  table_ = JumpTable(spec.measure, cfg.epsilon, kInf);
}

double LevySampler::increment(double dt, RngStream& rng) const {
  double inc = approx_.drift * dt;
  if (approx_.sigma > 0.0) inc += approx_.sigma * std::sqrt(dt) * rng.normal();
  if (mode_ == Mode::Stable) {
    inc += stable_increment(stable_, dt, rng);
  } else if (mode_ == Mode::CompoundPoisson && table_.rate() > 0.0) {
    double s = rng.exponential(table_.rate());
    while (s <= dt) {
      inc += table_.sample(rng.uniform());
      s += rng.exponential(table_.rate());
    }
  }
  return inc;
}

// ---------------------------------------------------------------------------
// Segments

double SegmentPath::value_at(double s) const {
  if (s <= 0.0) return values.front();
  auto it = std::upper_bound(times.begin(), times.end(), s);
  std::size_t idx = static_cast<std::size_t>(std::distance(times.begin(), it)) - 1;
  return values[idx];
}

SegmentSampler::SegmentSampler(const LevySpec& spec, const JumpLaw& law, const SamplerConfig& cfg)
    : spec_(spec), law_(law), levy_(spec, cfg) {}

SegmentPath SegmentSampler::sample(double step, double horizon, RngStream& rng) const {
  if (!(step > 0.0) || !(horizon > 0.0)) throw ParameterError("step and horizon must be positive");
  SegmentPath seg;
  seg.lifetime = rng.exponential(spec_.killing);
  seg.flip_jump = sample_jump(law_, rng);
  seg.censored = seg.lifetime > horizon;
  const double end = std::min(seg.lifetime, horizon);
  const std::size_t n_full = static_cast<std::size_t>(std::floor(end / step));
  seg.times.reserve(n_full + 2);
  seg.values.reserve(n_full + 2);
  seg.times.push_back(0.0);
  seg.values.push_back(0.0);

  const bool cpp = levy_.mode() == LevySampler::Mode::CompoundPoisson && levy_.jump_rate() > 0.0;
  const double rate = levy_.jump_rate();
  const double drift = levy_.drift();
  const double sigma = levy_.sigma();
  double next_jump = cpp ? rng.exponential(rate) : kInf;
  double t = 0.0;
  double v = 0.0;
  for (std::size_t k = 1;; ++k) {
    double t_next = std::min(static_cast<double>(k) * step, end);
    double dt = t_next - t;
    if (dt <= 0.0) break;
    double inc;
    if (levy_.mode() == LevySampler::Mode::Stable) {
      inc = levy_.increment(dt, rng);
    } else {
      inc = drift * dt;
      if (sigma > 0.0) inc += sigma * std::sqrt(dt) * rng.normal();
      while (next_jump <= t_next) {
        inc += levy_.table().sample(rng.uniform());
        next_jump += rng.exponential(rate);
      }
    }
    v += inc;
    t = t_next;
    seg.times.push_back(t);
    seg.values.push_back(v);
    if (t >= end) break;
  }
  seg.terminal_value = v;
  return seg;
}

SegmentPath sample_killed_segment(const LevySpec& spec, const GridSpec& grid, const JumpLaw& law,
                                  RngStream& rng, const SamplerConfig& cfg) {
  grid.validate();
  SegmentSampler sampler(spec, law, cfg);
  return sampler.sample(grid.step, grid.horizon, rng);
}

}  // namespace lk
