#include "lk/levy_model.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "lk/errors.hpp"
#include "lk/quadrature.hpp"

namespace lk {

namespace {

constexpr double kPi = std::numbers::pi;

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

double stable_nu(const StableParams& p, double y) {
  if (y > 0.0) return p.c_plus * std::pow(y, -p.alpha - 1.0);
  return p.c_minus * std::pow(-y, -p.alpha - 1.0);
}

// exp(k*y) * nu(s*(e^y - 1)) evaluated in log space.
double lamperti_density(const StableParams& p, int sign, double k, double y) {
  double e = std::expm1(y);
  double coeff = (sign * e > 0.0) ? p.c_plus : p.c_minus;
  if (coeff == 0.0) return 0.0;
  double logd = k * y + std::log(coeff) - (p.alpha + 1.0) * log_abs_expm1(y);
  return std::exp(logd);
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw ParameterError("sign must be +1 or -1");
}

}  // namespace

// ---------------------------------------------------------------------------
// StableParams

StableParams StableParams::make(double alpha, double c_plus, double c_minus) {
  StableParams p{alpha, c_plus, c_minus};
  p.validate();
  return p;
}

StableParams StableParams::symmetric_normalized(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("alpha must lie in (0, 2]");
  if (alpha == 2.0) return StableParams{2.0, 0.0, 0.0};
  if (alpha == 1.0) return StableParams{1.0, 1.0 / kPi, 1.0 / kPi};
  // c = -(2 c+) Gamma(2-alpha) cos(alpha pi/2) / (alpha (alpha-1)) = 1
  double cp = -alpha * (alpha - 1.0) / (2.0 * std::tgamma(2.0 - alpha) * std::cos(alpha * kPi / 2.0));
  return StableParams{alpha, cp, cp};
}

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("alpha must lie in (0, 2]");
  if (alpha == 2.0) return;
  if (!(c_plus >= 0.0) || !(c_minus >= 0.0)) throw ParameterError("c+ and c- must be nonnegative");
  if (!(c_plus + c_minus > 0.0)) throw ParameterError("c+ + c- must be positive");
  if (alpha == 1.0 && c_plus != c_minus)
    throw ParameterError("alpha = 1 is supported only for the symmetric Cauchy process");
}

double StableParams::a() const {
  if (alpha == 1.0 || alpha == 2.0) return 0.0;
  return (c_plus - c_minus) / (1.0 - alpha);
}

double StableParams::c() const {
  if (alpha == 2.0) return 0.5;
  if (alpha == 1.0) return c_plus * kPi;
  return -(c_plus + c_minus) * std::tgamma(2.0 - alpha) * std::cos(alpha * kPi / 2.0) /
         (alpha * (alpha - 1.0));
}

double StableParams::beta() const {
  if (alpha == 2.0) return 0.0;
  return (c_plus - c_minus) / (c_plus + c_minus);
}

std::complex<double> stable_char_exponent(const StableParams& p, double lam) {
  p.validate();
  if (lam == 0.0) return {0.0, 0.0};
  if (p.alpha == 2.0) return {-0.5 * lam * lam, 0.0};
  double mag = p.c() * std::pow(std::abs(lam), p.alpha);
  if (p.alpha == 1.0) return {-mag, 0.0};
  double skew = p.beta() * std::tan(kPi * p.alpha / 2.0) * sgn(lam);
  return {-mag, mag * skew};
}

double stable_theta(const StableParams& p, double lam) {
  return -stable_char_exponent(p, lam).real();
}

double k_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("k(alpha) needs alpha in (0, 1)");
  return alpha / (2.0 * std::tgamma(1.0 - alpha) * std::cos(kPi * alpha / 2.0));
}

// ---------------------------------------------------------------------------
// Measures

double compensator(double y) {
  double e = std::expm1(y);
  return std::abs(e) < 1.0 ? e : 0.0;
}

double log_abs_expm1(double y) {
  if (y > 30.0) return y + std::log1p(-std::exp(-y));
  return std::log(std::abs(std::expm1(y)));
}

MeasureSpec make_explicit_measure(std::function<double(double)> density, double lo, double hi,
                                  std::string label) {
  if (!density) throw ParameterError("explicit measure needs a density");
  if (!(lo < hi)) throw ParameterError("explicit measure support must be nonempty");
  ExplicitMeasure m{std::move(density), lo, hi, std::move(label)};
  for (int i = 1; i <= 400; ++i) {
    double frac = i / 401.0;
    double lo_f = std::isinf(lo) ? -50.0 : lo;
    double hi_f = std::isinf(hi) ? 50.0 : hi;
    double y = lo_f + (hi_f - lo_f) * frac;
    if (y == 0.0) continue;
    double d = m.density(y);
    if (!(d >= 0.0)) throw ParameterError("explicit measure density must be nonnegative");
  }
  // Quadrature alone can return a finite value for a nonintegrable power, so
  // compare y^3 d(y) near 0 and y d(y) far out at two scales.
  auto grows = [&](double y1, double y2, double pw) {
    if (!(y1 > lo && y1 < hi && y2 > lo && y2 < hi)) return false;
    double a = std::pow(std::abs(y1), pw) * m.density(y1);
    double b = std::pow(std::abs(y2), pw) * m.density(y2);
    return b > 0.0 && b >= a;
  };
  for (double s : {1.0, -1.0}) {
    if (grows(s * 1e-8, s * 1e-10, 3.0) || grows(s * 1e8, s * 1e10, 1.0))
      throw ParameterError("explicit measure does not integrate min(1, y^2)");
  }
  MeasureSpec spec = m;
  double act = measure_activity(spec);
  if (!std::isfinite(act)) throw ParameterError("explicit measure does not integrate min(1, y^2)");
  return spec;
}

double levy_density(const MeasureSpec& m, double y) {
  return std::visit(
      [y](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoMeasure>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, StableDensity>) {
          if (y == 0.0) throw DomainError("stable Levy density is undefined at 0");
          return stable_nu(v.params, y);
        } else if constexpr (std::is_same_v<T, LampertiStableZero>) {
          if (y == 0.0) throw DomainError("Lamperti-stable density is undefined at 0");
          return lamperti_density(v.params, v.sign, 1.0, y);
        } else if constexpr (std::is_same_v<T, LampertiStableCond>) {
          if (y == 0.0) throw DomainError("Lamperti-stable density is undefined at 0");
          return lamperti_density(v.params, v.sign, v.params.alpha, y);
        } else {
          if (y < v.lo || y > v.hi || y == 0.0) return 0.0;
          return v.density(y);
        }
      },
      m);
}

std::pair<double, double> measure_support(const MeasureSpec& m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [](const auto& v) -> std::pair<double, double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoMeasure>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, ExplicitMeasure>) {
          return {v.lo, v.hi};
        } else if constexpr (std::is_same_v<T, StableDensity>) {
          return {v.params.c_minus > 0.0 ? -inf : 0.0, v.params.c_plus > 0.0 ? inf : 0.0};
        } else {
          // e^y - 1 ranges over (-1, inf): positive y carries c^{s}, negative y c^{-s}.
          double up = v.sign > 0 ? v.params.c_plus : v.params.c_minus;
          double down = v.sign > 0 ? v.params.c_minus : v.params.c_plus;
          return {down > 0.0 ? -inf : 0.0, up > 0.0 ? inf : 0.0};
        }
      },
      m);
}

bool is_zero_measure(const MeasureSpec& m) {
  auto [lo, hi] = measure_support(m);
  return lo == 0.0 && hi == 0.0;
}

double measure_integral(const MeasureSpec& m, const std::function<double(double)>& g, double lo,
                        double hi, double rel_tol) {
  if (!(lo < hi)) return 0.0;
  if (lo < 0.0 && hi > 0.0) throw DomainError("measure_integral interval must not straddle 0");
  if (is_zero_measure(m)) return 0.0;
  auto [slo, shi] = measure_support(m);
  lo = std::max(lo, slo);
  hi = std::min(hi, shi);
  if (!(lo < hi)) return 0.0;

  // Work on the positive half line via reflection.
  const bool negative = hi <= 0.0;
  auto h = [&](double z) {
    double y = negative ? -z : z;
    double d = levy_density(m, y);
    if (d == 0.0) return 0.0;
    return g(y) * d;
  };
  double a = negative ? -hi : lo;
  double b = negative ? -lo : hi;

  std::array<double, 2> cuts{std::log(2.0), 1.0};
  quad::Options opt;
  opt.rel_tol = rel_tol;
  double total = 0.0;
  double start = a;
  if (start == 0.0) {
    double end = std::min(b, 1e-3);
    total += quad::tanh_sinh(h, 0.0, end, opt);
    start = end;
  }
  for (double cut : cuts) {
    if (start < cut && b > cut) {
      total += start > 0.0 ? quad::geometric(h, start, cut, opt) : 0.0;
      start = cut;
    }
  }
  if (start < b) {
    if (std::isinf(b)) {
      total += quad::upper_tail(h, start, opt);
    } else {
      total += quad::geometric(h, start, b, opt);
    }
  }
  return total;
}

double measure_activity(const MeasureSpec& m) {
  auto g = [](double y) { return std::min(1.0, y * y); };
  constexpr double inf = std::numeric_limits<double>::infinity();
  return measure_integral(m, g, -inf, 0.0) + measure_integral(m, g, 0.0, inf);
}

void LevySpec::validate() const {
  if (!(killing >= 0.0)) throw ParameterError("killing rate must be nonnegative");
  if (!(gaussian >= 0.0)) throw ParameterError("gaussian coefficient must be nonnegative");
  if (!std::isfinite(linear)) throw ParameterError("linear coefficient must be finite");
}

// ---------------------------------------------------------------------------
// Jump laws

namespace {

double log_pareto_zero_quantile(double alpha, double p) {
  // u = log((1-p)^{-1/alpha} - 1)
  return std::log(std::expm1(-std::log1p(-p) / alpha));
}

double log_pareto_zero_cdf(double alpha, double u) {
  // 1 - (1+e^u)^{-alpha}
  double l1p = u > 30.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  return -std::expm1(-alpha * l1p);
}

double log_pareto_log_density(double alpha, double k, double u) {
  double l1p = u > 30.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  return std::log(alpha) + k * u - (alpha + 1.0) * l1p;
}

}  // namespace

double jump_density(const JumpLaw& law, double u) {
  return std::visit(
      [u](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LogParetoZero>) {
          return std::exp(log_pareto_log_density(v.alpha, 1.0, u));
        } else if constexpr (std::is_same_v<T, LogParetoCond>) {
          return std::exp(log_pareto_log_density(v.alpha, v.alpha, u));
        } else if constexpr (std::is_same_v<T, Degenerate>) {
          return 0.0;
        } else {
          return v.density(u);
        }
      },
      law);
}

double jump_cdf(const JumpLaw& law, double u) {
  return std::visit(
      [u](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LogParetoZero>) {
          return log_pareto_zero_cdf(v.alpha, u);
        } else if constexpr (std::is_same_v<T, LogParetoCond>) {
          return 1.0 - log_pareto_zero_cdf(v.alpha, -u);
        } else if constexpr (std::is_same_v<T, Degenerate>) {
          return u >= v.value ? 1.0 : 0.0;
        } else {
          return quad::lower_tail(v.density, u);
        }
      },
      law);
}

double jump_quantile(const JumpLaw& law, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("quantile level must lie in [0, 1)");
  return std::visit(
      [p](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LogParetoZero>) {
          return log_pareto_zero_quantile(v.alpha, p);
        } else if constexpr (std::is_same_v<T, LogParetoCond>) {
          return -log_pareto_zero_quantile(v.alpha, 1.0 - p);
        } else if constexpr (std::is_same_v<T, Degenerate>) {
          return v.value;
        } else {
          return v.quantile(p);
        }
      },
      law);
}

// ---------------------------------------------------------------------------
// Stable characteristics

SignCharacteristics killed_stable_characteristics(const StableParams& p, int sign) {
  p.validate();
  check_sign(sign);
  if (p.alpha == 2.0)
    throw ParameterError("alpha = 2 has no jumps; use the Brownian model instead");
  SignCharacteristics out;
  out.levy.linear = sign * p.a();
  out.levy.gaussian = 0.0;
  out.levy.measure = LampertiStableZero{p, sign};
  out.levy.killing = (sign > 0 ? p.c_minus : p.c_plus) / p.alpha;
  out.jump = LogParetoZero{p.alpha};
  return out;
}

std::pair<double, double> conditioned_drift_integrals(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw ParameterError("conditioned drift needs alpha in (1, 2)");
  constexpr double delta = 1e-3;
  quad::Options opt;
  opt.rel_tol = 1e-13;
  auto series = [alpha](double s) {
    // int_0^delta ((1 + s u)^{alpha-1} - 1) u^{-alpha} du by the binomial series.
    double total = 0.0;
    double binom = 1.0;
    for (int k = 1; k <= 8; ++k) {
      binom *= (alpha - 1.0 - (k - 1)) / k;
      total += binom * std::pow(s, k) * std::pow(delta, k + 1 - alpha) / (k + 1 - alpha);
    }
    return total;
  };
  auto plus = [alpha](double u) { return std::expm1((alpha - 1.0) * std::log1p(u)) * std::pow(u, -alpha); };
  auto minus = [alpha](double u) {
    return std::expm1((alpha - 1.0) * std::log1p(-u)) * std::pow(u, -alpha);
  };
  double first = series(1.0) + quad::gauss_kronrod(plus, delta, 1.0, opt);
  double second = series(-1.0) + quad::tanh_sinh(minus, delta, 1.0, opt);
  return {first, second};
}

SignCharacteristics conditioned_stable_characteristics(const StableParams& p, int sign) {
  p.validate();
  check_sign(sign);
  if (!(p.alpha > 1.0 && p.alpha < 2.0))
    throw ParameterError("the conditioned construction requires alpha in (1, 2)");
  auto [i_plus, i_minus] = conditioned_drift_integrals(p.alpha);
  double c_same = sign > 0 ? p.c_plus : p.c_minus;
  double c_other = sign > 0 ? p.c_minus : p.c_plus;
  SignCharacteristics out;
  out.levy.linear = sign * p.a() + c_same * i_plus - c_other * i_minus;
  out.levy.gaussian = 0.0;
  out.levy.measure = LampertiStableCond{p, sign};
  out.levy.killing = c_same / p.alpha;
  out.jump = LogParetoCond{p.alpha};
  return out;
}

double h_constant(const StableParams& p) {
  p.validate();
  if (!(p.alpha > 1.0 && p.alpha < 2.0)) throw ParameterError("h needs alpha in (1, 2)");
  double al = p.alpha;
  double b = p.beta();
  double t = std::tan(al * kPi / 2.0);
  return std::tgamma(2.0 - al) * std::sin(al * kPi / 2.0) /
         (p.c() * kPi * (al - 1.0) * (1.0 + b * b * t * t));
}

double h_function(const StableParams& p, double x) {
  if (x == 0.0) return 0.0;
  return h_constant(p) * (1.0 - p.beta() * sgn(x)) * std::pow(std::abs(x), p.alpha - 1.0);
}

Regime classify_regime(double q_plus, double q_minus) {
  if (!(q_plus >= 0.0) || !(q_minus >= 0.0)) throw ParameterError("flip rates must be nonnegative");
  if (q_plus > 0.0 && q_minus > 0.0) return Regime::C4;
  if (q_plus > 0.0) return Regime::C1;
  if (q_minus > 0.0) return Regime::C2;
  return Regime::C3;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::C1: return "C1";
    case Regime::C2: return "C2";
    case Regime::C3: return "C3";
    case Regime::C4: return "C4";
  }
  return "?";
}

std::string measure_name(const MeasureSpec& m) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoMeasure>) return "none";
        else if constexpr (std::is_same_v<T, StableDensity>) return "stable";
        else if constexpr (std::is_same_v<T, LampertiStableZero>)
          return v.sign > 0 ? "lamperti-stable-zero(+)" : "lamperti-stable-zero(-)";
        else if constexpr (std::is_same_v<T, LampertiStableCond>)
          return v.sign > 0 ? "lamperti-stable-cond(+)" : "lamperti-stable-cond(-)";
        else return v.label;
      },
      m);
}

std::string jump_name(const JumpLaw& law) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LogParetoZero>) return "log-pareto";
        else if constexpr (std::is_same_v<T, LogParetoCond>) return "log-pareto-reflected";
        else if constexpr (std::is_same_v<T, Degenerate>) return "degenerate";
        else return v.label;
      },
      law);
}

}  // namespace lk
