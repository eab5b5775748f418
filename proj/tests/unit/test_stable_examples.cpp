#include <doctest.h>

#include <cmath>

#include "lk/errors.hpp"
#include "lk/stable_models.hpp"

using namespace lk;
using doctest::Approx;

TEST_CASE("presets") {
  for (const auto& name : StableModel::preset_names()) CHECK_NOTHROW(StableModel::preset(name).validate());
  CHECK_THROWS_AS(StableModel::preset("stable-2.5"), ConfigError);
  CHECK_THROWS_AS((StableModel{StableParams::make(0.8, 1, 1), Flavor::ConditionedAvoidZero}.validate()),
                  ParameterError);
  CHECK_THROWS_AS((StableModel{StableParams::make(1.5, 1, 1), Flavor::Brownian}.validate()), ParameterError);
}

TEST_CASE("Lamperti-Kiu data of the examples") {
  auto killed = build_lk(StableModel::preset("stable-killed-sym-1.5"));
  CHECK(killed.q_plus() == Approx(0.1994711402).epsilon(1e-9));
  CHECK(killed.q_minus() == killed.q_plus());
  CHECK(killed.regime() == Regime::C4);
  CHECK(std::holds_alternative<LogParetoZero>(killed.plus.jump));
  CHECK(std::holds_alternative<LampertiStableZero>(killed.minus.levy.measure));

  auto cond = build_lk(StableModel::preset("stable-cond-1.5"));
  CHECK(std::holds_alternative<LogParetoCond>(cond.plus.jump));
  CHECK(cond.q_plus() == Approx(0.1994711402).epsilon(1e-9));

  auto bm = build_lk(StableModel::preset("brownian"));
  CHECK(bm.regime() == Regime::C3);
  CHECK(bm.plus.levy.gaussian == 1.0);
  CHECK(bm.plus.levy.linear == -0.5);
  CHECK(brownian_characteristics(true).minus.levy.linear == 0.5);

  auto asym = build_lk(StableModel::preset("stable-killed-asym-1.5"));
  CHECK(asym.q_plus() == Approx(0.5 / 1.5));
  CHECK(asym.q_minus() == Approx(1.0 / 1.5));
}

TEST_CASE("direct stable paths") {
  auto p = StableParams::symmetric_normalized(1.5);
  RngStream rng(1);
  std::size_t zeros = 99;
  auto path = simulate_stable_direct(p, -0.7, GridSpec::make(0.01, 1.0), rng, &zeros);
  CHECK(path.size() == 101);
  CHECK(path.values.front() == -0.7);
  CHECK(path.times.back() == Approx(1.0));
  CHECK(zeros == 0);
  for (std::size_t i : path.flip_indices) CHECK(path.values[i] * path.values[i + 1] < 0.0);

  RngStream a(2), b(2);
  CHECK(simulate_stable_direct(p, 1.0, GridSpec::make(0.1, 1.0), a).values ==
        simulate_stable_direct(p, 1.0, GridSpec::make(0.1, 1.0), b).values);
  auto bm = simulate_stable_direct(StableParams::make(2.0, 0.5, 0.5), 1.0, GridSpec::make(0.1, 1.0), a);
  CHECK(bm.size() == 11);
  CHECK_THROWS_AS(simulate_stable_direct(p, 0.0, GridSpec::make(0.1, 1.0), a), DomainError);
}

TEST_CASE("self-similar flip runs") {
  auto p = StableParams::symmetric_normalized(1.5);
  SelfSimilarOptions opt;
  opt.h = 1e-3;
  opt.max_flips = 5;
  RngStream rng(3);
  auto seq = simulate_stable_flips(p, 1.0, opt, rng);
  CHECK(seq.complete);
  REQUIRE(seq.flips.size() == 5);
  double prev_time = 0.0;
  double sign = 1.0;
  for (const auto& f : seq.flips) {
    CHECK(f.before * f.after < 0.0);
    CHECK(f.before * sign > 0.0);
    CHECK(f.time >= prev_time);
    CHECK(f.clock > 0.0);
    // Clocks are whole numbers of steps.
    CHECK(std::abs(f.clock / opt.h - std::round(f.clock / opt.h)) < 1e-6);
    prev_time = f.time;
    sign = -sign;
  }
  CHECK_THROWS_AS(simulate_stable_flips(StableParams::make(2.0, 1, 1), 1.0, opt, rng), Unsupported);
  opt.h = 0.0;
  CHECK_THROWS_AS(simulate_stable_flips(p, 1.0, opt, rng), ParameterError);
}

TEST_CASE("h-transform weights") {
  auto cond = StableModel::preset("stable-cond-1.5");
  CHECK(h_transform_weight(cond, 1.0, 4.0) == Approx(2.0));
  CHECK(h_transform_weight(cond, -2.0, 0.5) == Approx(0.5));
  CHECK(h_transform_weight(cond, 1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(h_transform_weight(StableModel::preset("stable-killed-sym-1.5"), 1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(h_transform_weight(cond, 0.0, 2.0), DomainError);
}
