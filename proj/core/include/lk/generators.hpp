#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lk/lk_process.hpp"

namespace lk {

/// A smooth test function with its first two derivatives.
struct TestFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  bool bounded = true;
  bool vanishes_at_zero = true;

  double operator()(double x) const { return f(x); }
};

/// x^2 e^{-x^2}, x / (1 + x^2), sin(x) e^{-x^2}.
std::vector<TestFunction> default_battery();
TestFunction zero_function();
TestFunction constant_function(double value);
/// a f + b g.
TestFunction linear_combination(double a, const TestFunction& f, double b, const TestFunction& g);
/// The product h f with h the invariant function of the killed stable process.
TestFunction times_h(const TestFunction& f, const StableParams& p);

/// Generator of the Lamperti-Kiu process at x:
/// b x f' + sigma^2/2 x^2 f'' + int (f(x e^y) - f(x) - x f'(x) l(y)) pi(dy)
/// + q (E f(-x e^U) - f(x)), with b = linear + sigma^2/2 and the
/// characteristics of sgn(x).
double generator_K(const TestFunction& f, double x, const LKCharacteristics& chars);

/// Generator of the stable process killed at zero, in the multiplicative
/// variable u (jumps x -> x u).
double generator_A0(const TestFunction& f, double x, const StableParams& p);

/// Generator of the stable process conditioned to avoid zero.
double generator_Acond(const TestFunction& f, double x, const StableParams& p);

struct GeneratorReport {
  std::string label;
  std::string method;
  double x = 0.0;
  double formula = 0.0;
  double oracle = 0.0;
  double oracle_se = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;

  static GeneratorReport make(std::string label, std::string method, double x, double formula,
                              double oracle, double oracle_se = 0.0);
};

struct Lemma14Result {
  double i1 = 0.0;
  double i2 = 0.0;
  double closed_form = 0.0;
  double error = 0.0;
};

/// The two truncation-change integrals and sgn(x) a (1 - |x|^{alpha-1}).
Lemma14Result lemma14_identity(double x, const StableParams& p);

}  // namespace lk
