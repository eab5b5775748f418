#pragma once

#include <functional>
#include <vector>

namespace lk::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double rel_tol = 1e-12;
  unsigned max_depth = 15;
};

/// Adaptive Gauss-Kronrod on a finite interval.
double gauss_kronrod(const Integrand& f, double a, double b, const Options& opt = {});

/// Double-exponential rule on a finite interval; tolerates integrable endpoint singularities.
double tanh_sinh(const Integrand& f, double a, double b, const Options& opt = {});

/// Integral over [a, +inf) for algebraically or exponentially decaying integrands.
double upper_tail(const Integrand& f, double a, const Options& opt = {});

/// Integral over (-inf, b].
double lower_tail(const Integrand& f, double b, const Options& opt = {});

/// Integral over [a, b] with 0 < a < b, split into geometric panels so that
/// integrands behaving like powers of y near a are resolved.
double geometric(const Integrand& f, double a, double b, const Options& opt = {});

/// Integral over [a, b] (either bound may be infinite) split at the given
/// interior points; points outside (a, b) are ignored.
double piecewise(const Integrand& f, double a, double b, std::vector<double> breaks,
                 const Options& opt = {});

}  // namespace lk::quad
