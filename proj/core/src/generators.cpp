#include "lk/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lk/errors.hpp"
#include "lk/quadrature.hpp"

namespace lk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Half-width of the window around the diagonal replaced by its Taylor expansion.
constexpr double kWindow = 1e-3;
constexpr double kRelTol = 1e-10;

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Gaussian-damped functions vanish numerically far out; the guard keeps
// inf * 0 from leaking into the quadratures.
double gauss_damp(double x) { return std::abs(x) > 40.0 ? 0.0 : std::exp(-x * x); }

quad::Integrand finite_only(quad::Integrand g) {
  return [g = std::move(g)](double u) {
    double v = g(u);
    return std::isfinite(v) ? v : 0.0;
  };
}

// x^3 f'''(x) by a central difference of f''.
double third_term(const TestFunction& f, double x) {
  double step = 1e-4 * std::max(1.0, std::abs(x));
  return x * x * x * (f.d2f(x + step) - f.d2f(x - step)) / (2.0 * step);
}

void check_admissible(const TestFunction& f) {
  if (!f.f || !f.df || !f.d2f) throw ContractError("test function needs f, f' and f''");
  if (!f.bounded) throw ContractError("test function must be bounded");
}

}  // namespace

std::vector<TestFunction> default_battery() {
  TestFunction f1{"f1",
                  [](double x) { return x * x * gauss_damp(x); },
                  [](double x) { return (2.0 * x - 2.0 * x * x * x) * gauss_damp(x); },
                  [](double x) {
                    double x2 = x * x;
                    return (2.0 - 10.0 * x2 + 4.0 * x2 * x2) * gauss_damp(x);
                  }};
  TestFunction f2{"f2",
                  [](double x) { return x == 0.0 || !std::isfinite(x) ? 0.0 : 1.0 / (x + 1.0 / x); },
                  [](double x) {
                    if (std::abs(x) > 1e100) return 0.0;
                    double d = 1.0 + x * x;
                    return (1.0 - x * x) / (d * d);
                  },
                  [](double x) {
                    if (std::abs(x) > 1e100) return 0.0;
                    double d = 1.0 + x * x;
                    return (2.0 * x * x * x - 6.0 * x) / (d * d * d);
                  }};
  TestFunction f3{"f3",
                  [](double x) { return std::sin(x) * gauss_damp(x); },
                  [](double x) { return (std::cos(x) - 2.0 * x * std::sin(x)) * gauss_damp(x); },
                  [](double x) {
                    return ((4.0 * x * x - 3.0) * std::sin(x) - 4.0 * x * std::cos(x)) * gauss_damp(x);
                  }};
  return {f1, f2, f3};
}

TestFunction zero_function() {
  auto z = [](double) { return 0.0; };
  return {"zero", z, z, z};
}

TestFunction constant_function(double value) {
  auto z = [](double) { return 0.0; };
  return {"constant", [value](double) { return value; }, z, z, true, value == 0.0};
}

TestFunction linear_combination(double a, const TestFunction& f, double b, const TestFunction& g) {
  TestFunction out;
  out.name = "lincomb";
  out.f = [=](double x) { return a * f.f(x) + b * g.f(x); };
  out.df = [=](double x) { return a * f.df(x) + b * g.df(x); };
  out.d2f = [=](double x) { return a * f.d2f(x) + b * g.d2f(x); };
  out.bounded = f.bounded && g.bounded;
  out.vanishes_at_zero = f.vanishes_at_zero && g.vanishes_at_zero;
  return out;
}

TestFunction times_h(const TestFunction& f, const StableParams& p) {
  const double al = p.alpha;
  auto h = [p](double x) { return h_function(p, x); };
  TestFunction out;
  out.name = "h*" + f.name;
  out.f = [=](double x) { return x == 0.0 ? 0.0 : h(x) * f.f(x); };
  out.df = [=](double x) {
    double hx = h(x);
    return (al - 1.0) * hx / x * f.f(x) + hx * f.df(x);
  };
  out.d2f = [=](double x) {
    double hx = h(x);
    double h1 = (al - 1.0) * hx / x;
    double h2 = (al - 1.0) * (al - 2.0) * hx / (x * x);
    return h2 * f.f(x) + 2.0 * h1 * f.df(x) + hx * f.d2f(x);
  };
  // Bounded when f decays faster than |x|^{1-alpha}.
  out.bounded = f.bounded && std::abs(out.f(1e8)) < 1e-6 && std::abs(out.f(-1e8)) < 1e-6;
  out.vanishes_at_zero = true;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double flip_expectation(const TestFunction& f, double x, const JumpLaw& law) {
  if (const auto* d = std::get_if<Degenerate>(&law)) return f(-x * std::exp(d->value));
  auto g = finite_only([&](double u) {
    double dens = jump_density(law, u);
    return dens == 0.0 ? 0.0 : f(-x * std::exp(u)) * dens;
  });
  quad::Options opt;
  opt.rel_tol = kRelTol;
  return quad::piecewise(g, -kInf, kInf, {-5.0, 0.0, 5.0}, opt);
}

}  // namespace

double generator_K(const TestFunction& f, double x, const LKCharacteristics& chars) {
  check_admissible(f);
  if (x == 0.0) throw DomainError("generator is evaluated on nonzero x");
  const auto& sc = chars.of(sgn(x));
  const LevySpec& spec = sc.levy;
  const double fx = f(x);
  const double d1 = x * f.df(x);
  const double d2 = x * x * f.d2f(x);
  const double s2 = spec.gaussian * spec.gaussian;
  double total = (spec.linear + 0.5 * s2) * d1 + 0.5 * s2 * d2;

  if (!is_zero_measure(spec.measure)) {
    // f(x e^y) - f(x) - x f' (e^y - 1) = d2 y^2 / 2 + (3 d2 + d3) y^3 / 6 + O(y^4)
    const double d3 = third_term(f, x);
    auto y2 = [](double y) { return y * y; };
    auto y3 = [](double y) { return y * y * y; };
    const auto& m = spec.measure;
    double w2 = measure_integral(m, y2, -kWindow, 0.0, kRelTol) + measure_integral(m, y2, 0.0, kWindow, kRelTol);
    double w3 = measure_integral(m, y3, -kWindow, 0.0, kRelTol) + measure_integral(m, y3, 0.0, kWindow, kRelTol);
    auto g = finite_only([&](double y) { return f(x * std::exp(y)) - fx - d1 * compensator(y); });
    total += 0.5 * d2 * w2 + (3.0 * d2 + d3) / 6.0 * w3;
    total += measure_integral(m, g, -kInf, -kWindow, kRelTol);
    total += measure_integral(m, g, kWindow, std::log(2.0), kRelTol);
    total += measure_integral(m, g, std::log(2.0), kInf, kRelTol);
  }
  if (spec.killing > 0.0) total += spec.killing * (flip_expectation(f, x, sc.jump) - fx);
  return total;
}

namespace {

// |x|^{-alpha} [drift x f' + int_{u>0} (f(xu) - f(x) - x f'(u-1) 1{|u-1|<1}) m(u) nu(s(u-1)) du
//               + neg_coef int_{u<0} (f(xu) - f(x)) neg_density(u) du]
// m1 is m'(1).
double multiplicative_generator(const TestFunction& f, double x, const StableParams& p, double drift,
                                const std::function<double(double)>& m, double m1, double neg_coef,
                                const std::function<double(double)>& neg_density) {
  check_admissible(f);
  if (x == 0.0) throw DomainError("generator is evaluated on nonzero x");
  const int s = sgn(x);
  const double al = p.alpha;
  const double c_right = s > 0 ? p.c_plus : p.c_minus;
  const double c_left = s > 0 ? p.c_minus : p.c_plus;
  const double fx = f(x);
  const double d1 = x * f.df(x);
  const double d2 = x * x * f.d2f(x);

  auto G = [&](double u) {
    double comp = std::abs(u - 1.0) < 1.0 ? d1 * (u - 1.0) : 0.0;
    return f(x * u) - fx - comp;
  };
  auto right = finite_only([&](double r) { return G(1.0 + r) * m(1.0 + r) * std::pow(r, -al - 1.0); });
  auto left = finite_only([&](double r) { return G(1.0 - r) * m(1.0 - r) * std::pow(r, -al - 1.0); });
  auto neg = finite_only([&](double v) { return (f(-x * v) - fx) * neg_density(-v); });

  quad::Options opt;
  opt.rel_tol = kRelTol;
  // G(1 + r) m(1 + r) = d2 r^2 / 2 + (d3 / 6 + m1 d2 / 2) r^3 + O(r^4)
  const double cubic = third_term(f, x) / 6.0 + 0.5 * m1 * d2;
  double window = 0.5 * d2 * (c_right + c_left) * std::pow(kWindow, 2.0 - al) / (2.0 - al) +
                  cubic * (c_right - c_left) * std::pow(kWindow, 3.0 - al) / (3.0 - al);
  double r_part = quad::geometric(right, kWindow, 1.0, opt) + quad::upper_tail(right, 1.0, opt);
  double l_part = quad::geometric(left, kWindow, 0.5, opt) + quad::tanh_sinh(left, 0.5, 1.0, opt);
  double n_part = quad::tanh_sinh(neg, 0.0, 1.0, opt) + quad::upper_tail(neg, 1.0, opt);
  double inner = drift * d1 + window + c_right * r_part + c_left * l_part + neg_coef * n_part;
  return std::pow(std::abs(x), -al) * inner;
}

}  // namespace

double generator_A0(const TestFunction& f, double x, const StableParams& p) {
  p.validate();
  if (!(p.alpha < 2.0)) throw ParameterError("the killed stable generator needs alpha in (0, 2)");
  const int s = sgn(x);
  const double al = p.alpha;
  const double c_other = s > 0 ? p.c_minus : p.c_plus;
  return multiplicative_generator(
      f, x, p, s * p.a(), [](double) { return 1.0; }, 0.0, c_other / al,
      [al](double u) { return al * std::pow(1.0 - u, -al - 1.0); });
}

double generator_Acond(const TestFunction& f, double x, const StableParams& p) {
  p.validate();
  if (!(p.alpha > 1.0 && p.alpha < 2.0))
    throw ParameterError("the conditioned generator needs alpha in (1, 2)");
  const int s = sgn(x);
  const double al = p.alpha;
  const double c_same = s > 0 ? p.c_plus : p.c_minus;
  const double drift = conditioned_stable_characteristics(p, s < 0 ? -1 : 1).levy.linear;
  return multiplicative_generator(
      f, x, p, drift, [al](double u) { return std::pow(u, al - 1.0); }, al - 1.0, c_same / al,
      [al](double u) { return al * std::pow(-u, al - 1.0) * std::pow(1.0 - u, -al - 1.0); });
}

GeneratorReport GeneratorReport::make(std::string label, std::string method, double x, double formula,
                                      double oracle, double oracle_se) {
  GeneratorReport r;
  r.label = std::move(label);
  r.method = std::move(method);
  r.x = x;
  r.formula = formula;
  r.oracle = oracle;
  r.oracle_se = oracle_se;
  r.abs_err = std::abs(formula - oracle);
  double scale = std::abs(formula);
  r.rel_err = scale > 0.0 ? r.abs_err / scale : (r.abs_err == 0.0 ? 0.0 : kInf);
  return r;
}

Lemma14Result lemma14_identity(double x, const StableParams& p) {
  p.validate();
  if (x == 0.0) throw DomainError("x must be nonzero");
  const int s = sgn(x);
  const double al = p.alpha;
  const double R = 1.0 / std::abs(x);
  auto nu = [&](double y) {
    if (y == 0.0) return 0.0;
    return (y > 0.0 ? p.c_plus : p.c_minus) * std::pow(std::abs(y), -al - 1.0);
  };
  auto i1 = [&](double u) {
    double r = std::abs(u - 1.0);
    double ind = (r < 1.0 ? 1.0 : 0.0) - (r < R ? 1.0 : 0.0);
    return ind == 0.0 ? 0.0 : (u - 1.0) * ind * nu(s * (u - 1.0));
  };
  auto i2 = [&](double u) {
    double r = std::abs(u - 1.0);
    return r < R ? (u - 1.0) * nu(s * (u - 1.0)) : 0.0;
  };
  quad::Options opt;
  opt.rel_tol = 1e-13;
  std::vector<double> breaks{1.0 - R, 1.0, 1.0 + R, 2.0};
  Lemma14Result out;
  out.i1 = quad::piecewise(i1, 0.0, std::max(2.0, 1.0 + R), breaks, opt);
  out.i2 = R > 1.0 ? quad::piecewise(i2, 1.0 - R, 0.0, {}, opt) : 0.0;
  out.closed_form = s * p.a() * (1.0 - std::pow(std::abs(x), al - 1.0));
  out.error = std::abs(out.i1 - out.i2 - out.closed_form);
  return out;
}

}  // namespace lk
