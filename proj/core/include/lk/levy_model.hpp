#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace lk {

/// Parameters (alpha, c+, c-) of a strictly stable driving process.
///
/// The Levy density is c+ y^{-alpha-1} on y > 0 and c- |y|^{-alpha-1} on
/// y < 0. alpha = 2 denotes standard Brownian motion (E exp(i l B_t) =
/// exp(-t l^2 / 2)) and ignores c+/c-.
struct StableParams {
  double alpha = 1.5;
  double c_plus = 1.0;
  double c_minus = 1.0;

  /// Validating constructor; throws ParameterError.
  static StableParams make(double alpha, double c_plus, double c_minus);
  /// Symmetric parameters with scale c = 1 (c+ = 1/pi for the Cauchy case).
  static StableParams symmetric_normalized(double alpha);

  void validate() const;
  bool symmetric() const { return c_plus == c_minus; }
  bool brownian() const { return alpha == 2.0; }

  /// Drift a = (c+ - c-)/(1 - alpha); zero for the symmetric Cauchy case.
  double a() const;
  /// Scale c such that Re psi(l) = -c |l|^alpha.
  double c() const;
  /// Skewness (c+ - c-)/(c+ + c-).
  double beta() const;
};

/// psi(l) with E exp(i l X_t) = exp(t psi(l)).
std::complex<double> stable_char_exponent(const StableParams& p, double lam);

/// theta(l) = -Re psi(l).
double stable_theta(const StableParams& p, double lam);

/// alpha / (2 Gamma(1 - alpha) cos(pi alpha / 2)), for alpha in (0, 1).
double k_alpha(double alpha);

// ---------------------------------------------------------------------------
// Levy measures

struct NoMeasure {};

struct StableDensity {
  StableParams params;
};

/// e^y nu(s (e^y - 1)): the measure of the killed-at-zero radial process.
struct LampertiStableZero {
  StableParams params;
  int sign = 1;
};

/// e^{alpha y} nu(s (e^y - 1)): the measure of the conditioned radial process.
struct LampertiStableCond {
  StableParams params;
  int sign = 1;
};

/// User supplied density on [lo, hi] \ {0}.
struct ExplicitMeasure {
  std::function<double(double)> density;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::string label = "explicit";
};

using MeasureSpec =
    std::variant<NoMeasure, StableDensity, LampertiStableZero, LampertiStableCond, ExplicitMeasure>;

/// Validates an Explicit measure (nonnegativity on a probe grid and finite
/// integral of min(1, y^2)); other variants validate their parameters.
MeasureSpec make_explicit_measure(std::function<double(double)> density, double lo, double hi,
                                  std::string label = "explicit");

double levy_density(const MeasureSpec& m, double y);

/// Lower and upper edge of the support (0 means one-sided).
std::pair<double, double> measure_support(const MeasureSpec& m);

bool is_zero_measure(const MeasureSpec& m);

/// Integral of g(y) pi(dy) over [lo, hi]; the interval must not contain 0 in
/// its interior. Handles the power singularity at 0 and infinite bounds.
double measure_integral(const MeasureSpec& m, const std::function<double(double)>& g, double lo,
                        double hi, double rel_tol = 1e-13);

/// Integral of min(1, y^2) pi(dy).
double measure_activity(const MeasureSpec& m);

/// Compensator l(y) = (e^y - 1) 1{|e^y - 1| < 1}.
double compensator(double y);

/// Natural log of |e^y - 1| without overflow.
double log_abs_expm1(double y);

// ---------------------------------------------------------------------------
// Characteristics

/// A (possibly killed) one dimensional Levy process with compensator l.
struct LevySpec {
  double linear = 0.0;
  double gaussian = 0.0;
  MeasureSpec measure = NoMeasure{};
  double killing = 0.0;

  void validate() const;
};

struct LogParetoZero {
  double alpha = 1.0;
};
struct LogParetoCond {
  double alpha = 1.0;
};
struct Degenerate {
  double value = 0.0;
};
struct ExplicitJump {
  std::function<double(double)> density;
  std::function<double(double)> quantile;
  std::string label = "explicit";
};

using JumpLaw = std::variant<LogParetoZero, LogParetoCond, Degenerate, ExplicitJump>;

/// Density of the flip jump; Degenerate laws have no density and return 0.
double jump_density(const JumpLaw& law, double u);
/// CDF; Explicit laws integrate their density numerically.
double jump_cdf(const JumpLaw& law, double u);
double jump_quantile(const JumpLaw& law, double p);

/// One sign's worth of Lamperti-Kiu data: the killed Levy process and the flip jump law.
struct SignCharacteristics {
  LevySpec levy;
  JumpLaw jump = Degenerate{0.0};
};

SignCharacteristics killed_stable_characteristics(const StableParams& p, int sign);
SignCharacteristics conditioned_stable_characteristics(const StableParams& p, int sign);

/// The two integrals entering the conditioned drift:
/// first = int_0^1 ((1+u)^{alpha-1} - 1) u^{-alpha} du, second uses (1-u).
std::pair<double, double> conditioned_drift_integrals(double alpha);

/// Invariant function of the killed stable semigroup, alpha in (1, 2).
double h_function(const StableParams& p, double x);
double h_constant(const StableParams& p);

enum class Regime { C1, C2, C3, C4 };

Regime classify_regime(double q_plus, double q_minus);
const char* regime_name(Regime r);

std::string measure_name(const MeasureSpec& m);
std::string jump_name(const JumpLaw& law);

}  // namespace lk
