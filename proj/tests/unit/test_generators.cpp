#include <doctest.h>

#include <cmath>

#include "lk/errors.hpp"
#include "lk/generators.hpp"
#include "lk/small_time.hpp"
#include "lk/stable_models.hpp"
#include "oracles.hpp"

using namespace lk;
using doctest::Approx;

namespace {

LKCharacteristics pure_flip(double q) {
  LKCharacteristics c;
  c.plus.levy = LevySpec{0.0, 0.0, NoMeasure{}, q};
  c.minus.levy = LevySpec{0.0, 0.0, NoMeasure{}, q};
  c.plus.jump = Degenerate{0.0};
  c.minus.jump = Degenerate{0.0};
  return c;
}

const std::vector<double> kXs = {-1.0, 0.5, 2.0};

}  // namespace

TEST_CASE("battery derivatives") {
  for (const auto& f : default_battery()) {
    for (double x : {-1.7, -0.3, 0.4, 2.2}) {
      const double e = 1e-5;
      CHECK(f.df(x) == Approx((f(x + e) - f(x - e)) / (2 * e)).epsilon(1e-7));
      CHECK(f.d2f(x) == Approx((f.df(x + e) - f.df(x - e)) / (2 * e)).epsilon(1e-7));
    }
    CHECK(f(0.0) == 0.0);
  }
}

TEST_CASE("trivial generators") {
  auto p = StableParams::symmetric_normalized(1.5);
  auto killed = build_lk(StableModel{p, Flavor::KilledAtZero});
  for (double x : kXs) {
    CHECK(generator_K(zero_function(), x, killed) == 0.0);
    CHECK(generator_A0(zero_function(), x, p) == 0.0);
    CHECK(std::abs(generator_Acond(constant_function(1.0), x, p)) < 1e-10);
  }
  auto f = default_battery()[0];
  for (double x : {-1.2, 0.7}) {
    CHECK(generator_K(f, x, pure_flip(0.8)) == Approx(0.8 * (f(-x) - f(x))));
  }
  CHECK_THROWS_AS(generator_K(f, 0.0, killed), DomainError);
  TestFunction broken{"broken", f.f, nullptr, f.d2f};
  CHECK_THROWS_AS(generator_A0(broken, 1.0, p), ContractError);
}

TEST_CASE("killed stable generator against the additive form") {
  for (auto [cp, cm] : {std::pair{0.2992067103, 0.2992067103}, std::pair{1.0, 0.5}}) {
    auto p = StableParams::make(1.5, cp, cm);
    for (const auto& f : default_battery()) {
      for (double x : kXs) {
        double want = oracle::stable_generator_additive(f.f, f.df, f.d2f, x, 1.5, cp, cm);
        CHECK(generator_A0(f, x, p) == Approx(want).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("frozen killed generator values") {
  auto p = StableParams::symmetric_normalized(1.5);
  auto b = default_battery();
  struct Row {
    double x, f1, f2, f3;
  };
  for (const Row& r : {Row{0.5, -0.0937580402, -0.9217388793, -1.2956848351},
                       Row{1.0, -0.8866493580, -0.5163736235, -0.4761520636},
                       Row{2.0, 0.2655375380, -0.0649103704, 0.1951793924}}) {
    CHECK(generator_A0(b[0], r.x, p) == Approx(r.f1).epsilon(1e-8));
    CHECK(generator_A0(b[1], r.x, p) == Approx(r.f2).epsilon(1e-8));
    CHECK(generator_A0(b[2], r.x, p) == Approx(r.f3).epsilon(1e-8));
    // Parity of the symmetric process.
    CHECK(generator_A0(b[0], -r.x, p) == Approx(r.f1).epsilon(1e-8));
    CHECK(generator_A0(b[1], -r.x, p) == Approx(-r.f2).epsilon(1e-8));
  }
}

TEST_CASE("time change of generators") {
  for (const auto& p : {StableParams::symmetric_normalized(1.5), StableParams::make(1.5, 1.0, 0.5),
                        StableParams::symmetric_normalized(0.8)}) {
    auto killed = build_lk(StableModel{p, Flavor::KilledAtZero});
    for (const auto& f : default_battery()) {
      for (double x : kXs) {
        double k = std::pow(std::abs(x), -p.alpha) * generator_K(f, x, killed);
        CHECK(k == Approx(generator_A0(f, x, p)).epsilon(1e-6));
      }
    }
  }
  auto p = StableParams::make(1.5, 1.0, 0.5);
  auto cond = build_lk(StableModel{p, Flavor::ConditionedAvoidZero});
  for (const auto& f : default_battery()) {
    for (double x : kXs) {
      double k = std::pow(std::abs(x), -1.5) * generator_K(f, x, cond);
      CHECK(k == Approx(generator_Acond(f, x, p)).epsilon(1e-6));
    }
  }
  // Brownian: x^{-2} K f = f'' / 2.
  auto bm = brownian_characteristics(false);
  for (const auto& f : default_battery())
    for (double x : kXs) CHECK(generator_K(f, x, bm) / (x * x) == Approx(0.5 * f.d2f(x)).epsilon(1e-12));
}

TEST_CASE("conditioned generator is the h-transform of the killed one") {
  for (const auto& p : {StableParams::symmetric_normalized(1.5), StableParams::make(1.5, 1.0, 0.5)}) {
    auto b = default_battery();
    for (const auto* f : {&b[0], &b[2]}) {
      auto hf = times_h(*f, p);
      for (double x : kXs) {
        double want = generator_A0(hf, x, p) / h_function(p, x);
        CHECK(generator_Acond(*f, x, p) == Approx(want).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("generators are linear") {
  auto p = StableParams::make(1.5, 1.0, 0.5);
  auto b = default_battery();
  auto g = linear_combination(2.0, b[0], -0.5, b[2]);
  auto killed = build_lk(StableModel{p, Flavor::KilledAtZero});
  for (double x : kXs) {
    CHECK(generator_A0(g, x, p) ==
          Approx(2.0 * generator_A0(b[0], x, p) - 0.5 * generator_A0(b[2], x, p)).epsilon(1e-9));
    CHECK(generator_K(g, x, killed) ==
          Approx(2.0 * generator_K(b[0], x, killed) - 0.5 * generator_K(b[2], x, killed)).epsilon(1e-9));
  }
}

TEST_CASE("truncation-change identity") {
  struct Case {
    double x, alpha, cp, cm;
  };
  for (const Case& c : {Case{-1, 1.5, 1, .5}, Case{.4, 1.5, 1, .5}, Case{3, 1.5, 1, .5}, Case{.5, .7, 2, 1},
                        Case{-2, .7, .3, 1}, Case{2, 1.8, 1, 3}, Case{-.25, 1.2, .5, 1.5}}) {
    auto p = StableParams::make(c.alpha, c.cp, c.cm);
    auto r = lemma14_identity(c.x, p);
    double s = c.x > 0 ? 1.0 : -1.0;
    CHECK(r.closed_form == Approx(s * p.a() * (1.0 - std::pow(std::abs(c.x), c.alpha - 1.0))).epsilon(1e-13));
    CHECK(r.error < 1e-9);
  }
  CHECK_THROWS_AS(lemma14_identity(0.0, StableParams::make(1.5, 1, 1)), DomainError);
}

TEST_CASE("Monte Carlo generator at small sample sizes") {
  auto p = StableParams::symmetric_normalized(1.5);
  auto f = default_battery()[0];
  DirectStableSampler direct(p);
  RngStream rng(21);
  auto est = mc_generator(f, 1.0, direct, 1e-3, 20000, rng);
  CHECK(est.n == 20000);
  CHECK(est.se > 0.0);
  CHECK(std::abs(est.estimate - generator_A0(f, 1.0, p)) < 5.0 * est.se + 0.02);

  RngStream rng2(22);
  auto rep = volkonskii_check(f, 1.0, build_lk(StableModel{p, Flavor::KilledAtZero}), 1.5, 1e-3, 20000, rng2);
  CHECK(rep.formula == Approx(generator_A0(f, 1.0, p)).epsilon(1e-6));
  CHECK(rep.abs_err < 5.0 * rep.oracle_se + 0.02);
}
