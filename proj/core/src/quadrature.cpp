#include "lk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lk/errors.hpp"

namespace lk::quad {

namespace bq = boost::math::quadrature;

double gauss_kronrod(const Integrand& f, double a, double b, const Options& opt) {
  if (a == b) return 0.0;
  double err = 0.0;
  return bq::gauss_kronrod<double, 31>::integrate(f, a, b, opt.max_depth, opt.rel_tol, &err);
}

double tanh_sinh(const Integrand& f, double a, double b, const Options& opt) {
  if (a == b) return 0.0;
  static thread_local bq::tanh_sinh<double> integrator(15);
  auto g = [&](double x) {
    double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrator.integrate(g, a, b, opt.rel_tol);
}

double upper_tail(const Integrand& f, double a, const Options& opt) {
  static thread_local bq::exp_sinh<double> integrator(12);
  auto g = [&](double s) {
    double v = f(a + s);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity(), opt.rel_tol);
}

double lower_tail(const Integrand& f, double b, const Options& opt) {
  return upper_tail([&](double s) { return f(2.0 * b - s); }, b, opt);
}

double geometric(const Integrand& f, double a, double b, const Options& opt) {
  if (!(a > 0.0) || !(b > a)) {
    if (a == b) return 0.0;
    throw DomainError("geometric quadrature needs 0 < a < b");
  }
  double total = 0.0;
  double lo = a;
  while (lo < b) {
    double hi = std::min(b, lo * 4.0);
    total += gauss_kronrod(f, lo, hi, opt);
    lo = hi;
  }
  return total;
}

double piecewise(const Integrand& f, double a, double b, std::vector<double> breaks,
                 const Options& opt) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double p : breaks) {
    if (p > a && p < b) pts.push_back(p);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    if (std::isinf(lo) && std::isinf(hi)) {
      total += lower_tail(f, 0.0, opt) + upper_tail(f, 0.0, opt);
    } else if (std::isinf(lo)) {
      total += lower_tail(f, hi, opt);
    } else if (std::isinf(hi)) {
      total += upper_tail(f, lo, opt);
    } else {
      total += gauss_kronrod(f, lo, hi, opt);
    }
  }
  return total;
}

}  // namespace lk::quad
