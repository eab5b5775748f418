#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lk/errors.hpp"
#include "lk/levy_model.hpp"
#include "lk/quadrature.hpp"
#include "oracles.hpp"

using namespace lk;
using doctest::Approx;

TEST_CASE("stable params validation and derived constants") {
  CHECK_THROWS_AS(StableParams::make(0.0, 1, 1), ParameterError);
  CHECK_THROWS_AS(StableParams::make(2.5, 1, 1), ParameterError);
  CHECK_THROWS_AS(StableParams::make(1.5, 0, 0), ParameterError);
  CHECK_THROWS_AS(StableParams::make(1.0, 1, 0.5), ParameterError);
  CHECK_THROWS_AS(StableParams::make(1.5, -1, 1), ParameterError);
  CHECK_NOTHROW(StableParams::make(1.0, 0.3, 0.3));

  auto p = StableParams::make(1.5, 1.0, 0.5);
  CHECK(p.a() == Approx(0.5 / -0.5));
  CHECK(p.beta() == Approx(0.5 / 1.5));
  double c = -(1.5) * std::tgamma(0.5) * std::cos(0.75 * std::numbers::pi) / (1.5 * 0.5);
  CHECK(p.c() == Approx(c).epsilon(1e-14));
  CHECK(StableParams::make(1.0, 0.3, 0.3).a() == 0.0);
}

TEST_CASE("symmetric normalization gives unit scale") {
  for (double al : {0.5, 0.7, 1.2, 1.5, 1.8}) {
    auto p = StableParams::symmetric_normalized(al);
    CHECK(p.c_plus == p.c_minus);
    CHECK(p.c() == Approx(1.0).epsilon(1e-13));
    CHECK(p.c_plus == Approx(oracle::normalized_c(al)).epsilon(1e-13));
  }
  // Frozen values of the normalized constants and the flip rate at alpha = 1.5.
  auto p = StableParams::symmetric_normalized(1.5);
  CHECK(p.c_plus == Approx(0.2992067103).epsilon(1e-9));
  CHECK(p.c_minus / 1.5 == Approx(0.1994711402).epsilon(1e-9));
  CHECK(StableParams::symmetric_normalized(1.0).c_plus == Approx(1.0 / std::numbers::pi));
}

TEST_CASE("characteristic exponent") {
  auto sym = StableParams::symmetric_normalized(1.5);
  CHECK(std::abs(stable_char_exponent(sym, 0.0)) == 0.0);
  for (double l : {-3.0, -0.5, 0.7, 2.0}) {
    auto v = stable_char_exponent(sym, l);
    CHECK(v.real() == Approx(-std::pow(std::abs(l), 1.5)).epsilon(1e-13));
    CHECK(v.imag() == Approx(0.0).epsilon(1e-13));
    CHECK(stable_theta(sym, l) == Approx(std::pow(std::abs(l), 1.5)));
  }
  auto cauchy = StableParams::make(1.0, 0.4, 0.4);
  CHECK(stable_char_exponent(cauchy, -2.0).real() == Approx(-0.4 * std::numbers::pi * 2.0));

  SUBCASE("agrees with the integral representation") {
    for (auto [cp, cm] : {std::pair{1.0, 0.5}, std::pair{0.2992067103, 0.2992067103}, std::pair{0.3, 1.2}}) {
      auto p = StableParams::make(1.5, cp, cm);
      for (double l : {-4.0, -1.0, -0.5, 0.5, 1.0, 4.0}) {
        auto want = oracle::stable_exponent_by_quadrature(1.5, cp, cm, l);
        auto got = stable_char_exponent(p, l);
        CHECK(std::abs(got - want) / std::abs(want) < 1e-6);
      }
    }
  }
}

TEST_CASE("levy densities") {
  auto p = StableParams::make(1.5, 1.0, 0.5);
  CHECK(levy_density(StableDensity{StableParams::make(1.5, 1, 1)}, 1.0) == 1.0);
  CHECK_THROWS_AS(levy_density(StableDensity{p}, 0.0), DomainError);
  CHECK(levy_density(StableDensity{p}, -2.0) == Approx(0.5 * std::pow(2.0, -2.5)));
  CHECK(levy_density(LampertiStableZero{p, 1}, std::log(2.0)) == Approx(2.0).epsilon(1e-14));

  // Killed measure of the symmetric alpha = 0.5 process is the first radial measure.
  const double al = 0.5;
  const double k = al / (2.0 * std::tgamma(1.0 - al) * std::cos(std::numbers::pi * al / 2.0));
  CHECK(k_alpha(al) == Approx(k).epsilon(1e-15));
  auto ps = StableParams::make(al, k, k);
  for (double y = -5.0; y <= 5.0; y += 0.37) {
    if (std::abs(y) < 1e-12) continue;
    double pi1 = y > 0 ? k * std::exp(y) / std::pow(std::expm1(y), al + 1.0)
                       : k * std::exp(y) / std::pow(-std::expm1(y), al + 1.0);
    CHECK(std::abs(levy_density(LampertiStableZero{ps, 1}, y) - pi1) <= 1e-12 * std::max(1.0, pi1));
  }

  SUBCASE("conditioned measure is an exponential tilt of the killed one") {
    for (int s : {1, -1}) {
      for (double y = -8.0; y <= 8.0; y += 0.13) {
        if (std::abs(y) < 1e-9) continue;
        double zero = levy_density(LampertiStableZero{p, s}, y);
        double cond = levy_density(LampertiStableCond{p, s}, y);
        CHECK(cond == Approx(std::exp(0.5 * y) * zero).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("measures have finite activity") {
  auto p = StableParams::make(1.5, 1.0, 0.5);
  for (const MeasureSpec& m : {MeasureSpec{StableDensity{p}}, MeasureSpec{LampertiStableZero{p, 1}},
                               MeasureSpec{LampertiStableZero{p, -1}}, MeasureSpec{LampertiStableCond{p, 1}},
                               MeasureSpec{LampertiStableCond{p, -1}}}) {
    double act = measure_activity(m);
    CHECK(std::isfinite(act));
    CHECK(act > 0.0);
  }
  // Closed form for the stable density: int min(1, y^2) nu = (c+ + c-) (1/(2 - a) + 1/a).
  CHECK(measure_activity(StableDensity{p}) == Approx(1.5 * (1.0 / 0.5 + 1.0 / 1.5)).epsilon(1e-6));
  CHECK(measure_activity(NoMeasure{}) == 0.0);

  auto e = make_explicit_measure([](double y) { return std::exp(-std::abs(y)); }, -10.0, 10.0);
  CHECK(levy_density(e, 1.0) == Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(make_explicit_measure([](double) { return -1.0; }, -1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(make_explicit_measure([](double y) { return std::pow(std::abs(y), -3.5); }, -1.0, 1.0),
                  ParameterError);
}

TEST_CASE("measure integrals against closed forms") {
  auto p = StableParams::make(1.5, 1.0, 0.5);
  // int_1^inf nu = c+ / alpha; int_{-inf}^{-2} nu = c- 2^{-alpha} / alpha.
  CHECK(measure_integral(StableDensity{p}, [](double) { return 1.0; }, 1.0, INFINITY) ==
        Approx(1.0 / 1.5).epsilon(1e-11));
  CHECK(measure_integral(StableDensity{p}, [](double) { return 1.0; }, -INFINITY, -2.0) ==
        Approx(0.5 * std::pow(2.0, -1.5) / 1.5).epsilon(1e-11));
  // int_0^1 y^2 nu = c+ / (2 - alpha)
  CHECK(measure_integral(StableDensity{p}, [](double y) { return y * y; }, 0.0, 1.0) ==
        Approx(1.0 / 0.5).epsilon(1e-10));
  // The killed measure on y > 0 integrates (e^y - 1)^{-alpha} e^y: int_{log 2}^inf = c+ / alpha.
  CHECK(measure_integral(LampertiStableZero{p, 1}, [](double) { return 1.0; }, std::log(2.0), INFINITY) ==
        Approx(1.0 / 1.5).epsilon(1e-10));
}

TEST_CASE("jump laws") {
  for (double al : {0.5, 1.0, 1.5}) {
    LogParetoZero z{al};
    LogParetoCond c{al};
    for (double u = -6.0; u <= 6.0; u += 0.25) {
      CHECK(jump_density(c, u) == Approx(jump_density(z, -u)).epsilon(1e-12));
      double G = 1.0 - std::pow(1.0 + std::exp(u), -al);
      CHECK(jump_cdf(z, u) == Approx(G).epsilon(1e-12));
    }
    for (double q = 0.1; q < 0.95; q += 0.1) {
      CHECK(jump_cdf(z, jump_quantile(z, q)) == Approx(q).epsilon(1e-12));
      CHECK(jump_cdf(c, jump_quantile(c, q)) == Approx(q).epsilon(1e-12));
    }
    double mass = oracle::gk([&](double u) { return jump_density(z, u); }, -60.0, 0.0) +
                  oracle::tail([&](double u) { return jump_density(z, u); }, 0.0);
    CHECK(std::abs(mass - 1.0) <= 1e-8);
  }
  CHECK(jump_quantile(LogParetoZero{1.0}, 0.5) == Approx(0.0).epsilon(1e-15));
  CHECK(jump_cdf(Degenerate{0.0}, -1e-9) == 0.0);
  CHECK(jump_cdf(Degenerate{0.0}, 0.0) == 1.0);
  CHECK_THROWS_AS(jump_quantile(LogParetoZero{1.5}, 1.0), DomainError);
}

TEST_CASE("killed stable characteristics") {
  auto p = StableParams::symmetric_normalized(1.5);
  auto plus = killed_stable_characteristics(p, 1);
  auto minus = killed_stable_characteristics(p, -1);
  CHECK(plus.levy.killing == Approx(0.1994711402).epsilon(1e-9));
  CHECK(minus.levy.killing == plus.levy.killing);
  CHECK(plus.levy.gaussian == 0.0);
  CHECK(std::holds_alternative<LogParetoZero>(plus.jump));

  auto asym = StableParams::make(1.5, 1.0, 0.5);
  CHECK(killed_stable_characteristics(asym, 1).levy.killing == Approx(0.5 / 1.5));
  CHECK(killed_stable_characteristics(asym, -1).levy.killing == Approx(1.0 / 1.5));
  CHECK(killed_stable_characteristics(asym, 1).levy.linear == Approx(asym.a()));
  CHECK(killed_stable_characteristics(asym, -1).levy.linear == Approx(-asym.a()));
  CHECK(killed_stable_characteristics(StableParams::make(1.5, 1.0, 0.0), 1).levy.killing == 0.0);
  CHECK_THROWS_AS(killed_stable_characteristics(StableParams::make(2.0, 1, 1), 1), ParameterError);

  // alpha = 0.5 symmetric at c+- = k(0.5): flip rate k / alpha.
  auto half = StableParams::symmetric_normalized(0.5);
  CHECK(half.c_plus == Approx(k_alpha(0.5)).epsilon(1e-13));
  CHECK(killed_stable_characteristics(half, 1).levy.killing == Approx(0.3989422804).epsilon(1e-9));
}

TEST_CASE("conditioned stable characteristics") {
  auto sym = StableParams::symmetric_normalized(1.5);
  auto plus = conditioned_stable_characteristics(sym, 1);
  auto minus = conditioned_stable_characteristics(sym, -1);
  CHECK(plus.levy.linear == Approx(minus.levy.linear).epsilon(1e-14));
  CHECK(std::holds_alternative<LogParetoCond>(plus.jump));

  auto [i1, i2] = conditioned_drift_integrals(1.5);
  // u = v^2 removes the endpoint singularity.
  auto sub = [](double s) {
    return [s](double v) { return v < 1e-8 ? s : 2.0 * std::expm1(0.5 * std::log1p(s * v * v)) / (v * v); };
  };
  double o1 = oracle::ts(sub(1.0), 0.0, 1.0);
  double o2 = oracle::ts(sub(-1.0), 0.0, 1.0);
  CHECK(i1 == Approx(o1).epsilon(1e-10));
  CHECK(i2 == Approx(o2).epsilon(1e-10));
  CHECK(i2 == Approx(2.0 - std::numbers::pi).epsilon(1e-12));

  auto asym = StableParams::make(1.5, 1.0, 0.5);
  auto ap = conditioned_stable_characteristics(asym, 1);
  CHECK(ap.levy.linear == Approx(asym.a() + 1.0 * o1 - 0.5 * o2).epsilon(1e-10));
  CHECK(ap.levy.linear == Approx(0.5051163761).epsilon(1e-8));
  CHECK(ap.levy.killing == Approx(1.0 / 1.5));
  CHECK(conditioned_stable_characteristics(asym, -1).levy.killing == Approx(0.5 / 1.5));
  CHECK_THROWS_AS(conditioned_stable_characteristics(StableParams::make(0.8, 1, 1), 1), ParameterError);
}

TEST_CASE("h function") {
  auto sym = StableParams::symmetric_normalized(1.5);
  CHECK(h_function(sym, 0.0) == 0.0);
  CHECK(h_function(sym, 1.0) == Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-13));

  auto p = StableParams::make(1.5, 1.0, 0.5);
  const double K = h_constant(p);
  const double b = p.beta();
  for (double x : {-3.0, -1.0, -0.2, 0.2, 1.0, 3.0}) {
    CHECK(h_function(p, x) > 0.0);
    double s = x > 0 ? 1.0 : -1.0;
    CHECK(std::abs(h_function(p, -x) - h_function(p, x) - 2.0 * K * b * s * std::pow(std::abs(x), 0.5)) <= 1e-12);
    for (double u : {-2.0, -0.5, 0.3, 4.0}) {
      double su = u > 0 ? 1.0 : -1.0;
      CHECK(h_function(p, u * x) == Approx(std::pow(std::abs(u), 0.5) * h_function(p, su * x)).epsilon(1e-13));
    }
    // Product rule for f(x) = x^2: (h f)' = h ((alpha - 1) f / x + f').
    const double e = 1e-5;
    auto hf = [&](double y) { return h_function(p, y) * y * y; };
    double numeric = (hf(x + e) - hf(x - e)) / (2 * e);
    CHECK(numeric == Approx(h_function(p, x) * (0.5 * x + 2.0 * x)).epsilon(1e-7));
  }
  CHECK_THROWS_AS(h_constant(StableParams::make(0.5, 1, 1)), ParameterError);
}

TEST_CASE("regimes") {
  CHECK(classify_regime(0.2, 0.2) == Regime::C4);
  CHECK(classify_regime(0.2, 0.0) == Regime::C1);
  CHECK(classify_regime(0.0, 0.2) == Regime::C2);
  CHECK(classify_regime(0.0, 0.0) == Regime::C3);
  CHECK_THROWS_AS(classify_regime(-1.0, 0.0), ParameterError);
  auto p = StableParams::symmetric_normalized(1.5);
  CHECK(classify_regime(killed_stable_characteristics(p, 1).levy.killing,
                        killed_stable_characteristics(p, -1).levy.killing) == Regime::C4);
  CHECK(std::string(regime_name(Regime::C4)) == "C4");
}

TEST_CASE("compensator helpers") {
  CHECK(compensator(0.1) == Approx(std::expm1(0.1)));
  CHECK(compensator(std::log(2.5)) == 0.0);
  CHECK(compensator(-5.0) == Approx(std::expm1(-5.0)));
  CHECK(log_abs_expm1(800.0) == Approx(800.0));
  CHECK(log_abs_expm1(-1.0) == Approx(std::log(1.0 - std::exp(-1.0))));
}

TEST_CASE("library quadrature") {
  quad::Options o;
  CHECK(quad::gauss_kronrod([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, o) == Approx(2.0));
  CHECK(quad::tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, o) == Approx(2.0).epsilon(1e-10));
  CHECK(quad::upper_tail([](double x) { return std::exp(-x); }, 1.0, o) == Approx(std::exp(-1.0)));
  CHECK(quad::lower_tail([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, o) ==
        Approx(std::numbers::pi / 2).epsilon(1e-10));
  CHECK(quad::geometric([](double y) { return std::pow(y, -0.5); }, 1e-8, 1.0, o) ==
        Approx(2.0 * (1.0 - 1e-4)).epsilon(1e-10));
  CHECK(quad::piecewise([](double x) { return std::abs(x); }, -1.0, 2.0, {0.0}, o) == Approx(2.5));
}
