#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lk/errors.hpp"
#include "lk/lk_process.hpp"

using namespace lk;
using doctest::Approx;

namespace {

// xi = 0 on both sides, flips at rates qp / qm that leave |Y| unchanged.
LKCharacteristics pure_flip(double qp, double qm) {
  LKCharacteristics c;
  c.plus.levy = LevySpec{0.0, 0.0, NoMeasure{}, qp};
  c.minus.levy = LevySpec{0.0, 0.0, NoMeasure{}, qm};
  c.plus.jump = Degenerate{0.0};
  c.minus.jump = Degenerate{0.0};
  return c;
}

LogPath hand_path() {
  LogPath p;
  p.start_sign = 1;
  SegmentPath a;
  a.times = {0.0, 0.5, 1.0};
  a.values = {0.0, 0.1, 0.2};
  a.lifetime = 1.0;
  a.terminal_value = 0.2;
  a.flip_jump = -0.05;
  SegmentPath b;
  b.times = {0.0, 1.0};
  b.values = {0.0, -0.1};
  b.lifetime = 3.0;
  b.terminal_value = -0.1;
  b.censored = true;
  p.segments = {a, b};
  p.renewal_times = {0.0, 1.0};
  p.offsets = {0.0, 0.15};
  p.horizon = 2.0;
  return p;
}

}  // namespace

TEST_CASE("hand-built path evaluation") {
  LogPath p = hand_path();
  CHECK(p.flip_count(0.99) == 0);
  CHECK(p.flip_count(1.0) == 1);
  CHECK(p.sign_at(1.5) == -1);
  CHECK(evaluate_Y(p, 2.0, 0.0) == 2.0);
  CHECK(evaluate_Y(p, 1.0, 0.7) == Approx(std::exp(0.1)));
  CHECK(evaluate_Y(p, 1.0, 1.0) == Approx(-std::exp(0.15)));
  CHECK(evaluate_Y(p, 1.0, 1.5) == Approx(-std::exp(0.15)));
  CHECK(evaluate_Y(p, 1.0, 2.0) == Approx(-std::exp(0.05)));
  CHECK(p.real_part(0.5) == Approx(0.1));
  CHECK(p.completed_segments() == 1);
  CHECK_THROWS_AS(evaluate_Y(p, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(evaluate_Y(p, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(evaluate_Y(p, 1.0, 2.5), RangeError);
}

TEST_CASE("pure flip paths") {
  LKSimulator sim(pure_flip(1.0, 1.0));
  for (std::uint64_t s = 0; s < 20; ++s) {
    LogPath p = sim.simulate(1, 5.0, 0.01, RngStream(1, s));
    CHECK(p.renewal_times.front() == 0.0);
    CHECK(p.segments.back().censored);
    CHECK(p.renewal_times.size() == p.segments.size());
    for (std::size_t k = 0; k < p.segments.size(); ++k) {
      double mid = k + 1 < p.renewal_times.size() ? 0.5 * (p.renewal_times[k] + p.renewal_times[k + 1])
                                                   : 0.5 * (p.renewal_times[k] + p.horizon);
      double y = evaluate_Y(p, 0.8, mid);
      CHECK(std::abs(y) == Approx(0.8));
      CHECK((y > 0) == (k % 2 == 0));
    }
  }
  SUBCASE("no flips without killing") {
    LKSimulator none(pure_flip(0.0, 0.0));
    LogPath p = none.simulate(-1, 3.0, 0.1, RngStream(2));
    CHECK(p.segments.size() == 1);
    CHECK(evaluate_Y(p, -1.5, 3.0) == -1.5);
    CHECK_THROWS_AS(none.simulate_segments(1, 3, 0.1, RngStream(2)), Unsupported);
  }
  SUBCASE("extension property") {
    auto ch = pure_flip(2.0, 0.5);
    LKSimulator s2(ch);
    RngStream root(3, 9);
    LogPath short_p = s2.simulate(1, 2.0, 0.1, root);
    LogPath long_p = s2.simulate(1, 6.0, 0.1, root);
    for (std::size_t k = 0; k + 1 < short_p.renewal_times.size(); ++k)
      CHECK(short_p.renewal_times[k] == long_p.renewal_times[k]);
  }
}

TEST_CASE("sign chain") {
  CHECK(flip_probability({1.0, 1.0, 1}, 0.0) == 0.0);
  CHECK(flip_probability({0.7, 0.7, 1}, 0.4) == Approx((1 - std::exp(-2 * 0.7 * 0.4)) / 2));
  CHECK(flip_probability({1.0, 2.0, 1}, 50.0) == Approx(1.0 / 3.0));
  CHECK(flip_probability({1.0, 2.0, -1}, 50.0) == Approx(2.0 / 3.0));
  CHECK(flip_probability({0.0, 0.0, 1}, 3.0) == 0.0);
  CHECK_THROWS_AS(flip_probability({1.0, 1.0, 1}, -1.0), DomainError);

  // Against simulated pure flip paths.
  LKSimulator sim(pure_flip(1.0, 2.0));
  const int n = 20000;
  const double t = 0.6;
  int flipped = 0;
  for (int i = 0; i < n; ++i) flipped += sim.simulate(1, 1.0, 0.5, RngStream(4, i)).sign_at(t) < 0;
  double p = flip_probability({1.0, 2.0, 1}, t);
  CHECK(std::abs(flipped / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("segment lifetimes") {
  LKSimulator sim(pure_flip(2.0, 0.5));
  std::vector<double> plus, minus;
  for (int i = 0; i < 300; ++i) {
    LogPath p = sim.simulate_segments(1, 10, 0.05, RngStream(5, i));
    REQUIRE(p.segments.size() == 10);
    CHECK(p.completed_segments() == 10);
    for (std::size_t k = 0; k + 1 < 10; ++k)
      (k % 2 == 0 ? plus : minus).push_back(p.renewal_times[k + 1] - p.renewal_times[k]);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  CHECK(std::abs(mean(plus) - 0.5) < 4.0 * 0.5 / std::sqrt(plus.size()));
  CHECK(std::abs(mean(minus) - 2.0) < 4.0 * 2.0 / std::sqrt(minus.size()));
}

TEST_CASE("scaling identity") {
  LogPath p = hand_path();
  auto s = scale_path(p, 1.0, -3.0);
  CHECK(s.start_value == 3.0);
  CHECK(s.outer_sign == -1);
  for (double t : {0.0, 0.3, 1.2, 2.0})
    CHECK(s.outer_sign * evaluate_Y(p, s.start_value, t) == Approx(-3.0 * evaluate_Y(p, 1.0, t)));
  auto u = scale_path(p, 2.0, 0.5);
  CHECK(u.start_value == 1.0);
  CHECK(u.outer_sign == 1);
  CHECK_THROWS_AS(scale_path(p, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(scale_path(p, -1.0, 2.0), DomainError);
}

TEST_CASE("simulation arguments") {
  LKSimulator sim(pure_flip(1.0, 1.0));
  CHECK_THROWS_AS(sim.simulate(0, 1.0, 0.1, RngStream(1)), ParameterError);
  CHECK_THROWS_AS(sim.simulate(1, 0.0, 0.1, RngStream(1)), ParameterError);
  CHECK_THROWS_AS(sim.simulate(1, 1.0, -0.1, RngStream(1)), ParameterError);
  CHECK_THROWS_AS(sim.simulate_segments(1, 0, 0.1, RngStream(1)), ParameterError);
  RngStream rng(6);
  LogPath p = simulate_log_path(pure_flip(1.0, 1.0), -1, 2.0, GridSpec::make(0.1, 2.0), rng);
  CHECK(p.start_sign == -1);
  CHECK(p.horizon == 2.0);
}
