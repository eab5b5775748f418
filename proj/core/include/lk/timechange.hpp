#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "lk/lk_process.hpp"

namespace lk {

/// A real path on an increasing time grid. flip_indices holds every i with
/// values[i] * values[i+1] < 0, i.e. the left grid point of a sign change.
struct SampledPath {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<std::size_t> flip_indices;

  static SampledPath from(std::vector<double> times, std::vector<double> values);
  void rebuild_flips();
  std::size_t size() const { return times.size(); }
};

/// A_s = int_0^s exp(alpha Re E_u) du on the piecewise-constant representation.
/// A is piecewise linear between the grid nodes of the LogPath, so the
/// inverse is exact for the representation.
class ExponentialFunctional {
 public:
  ExponentialFunctional(const LogPath& path, double alpha);

  double value(double s) const;
  /// tau(a) = inf{s : A_s > a}; throws HorizonExhausted when a >= A(horizon).
  double inverse(double a) const;
  double total() const { return acc_.back(); }
  double horizon() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& accumulated() const { return acc_; }
  /// Largest exp(alpha Re E) over the window, useful for inversion tolerances.
  double max_rate() const { return max_rate_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> acc_;
  std::vector<double> rate_;
  double max_rate_ = 0.0;
};

double functional_A(const LogPath& path, double alpha, double t);
double inverse_tau(const LogPath& path, double alpha, double t);

struct TimeChangedPath {
  std::shared_ptr<const LogPath> source;
  double x = 1.0;
  double alpha = 1.0;
  std::vector<double> table_s;
  std::vector<double> table_A;
  SampledPath samples;
};

/// X_t = Y_{tau(t |x|^{-alpha})} on the given increasing X-time grid.
TimeChangedPath y_to_x(std::shared_ptr<const LogPath> path, double x, double alpha,
                       const std::vector<double>& t_grid);

/// Y_s = X_{nu(s)} with nu the inverse of s -> int_0^s |X_u|^{-alpha} du,
/// sampled on the Y-time grid 0, y_step, 2 y_step, ... while nu is defined.
/// y_step = 0 picks the first X step rescaled by |X_0|^{-alpha}.
SampledPath x_to_y(const SampledPath& xpath, double alpha, double y_step = 0.0);

/// nu(s) for each s in the increasing list s_points (same accumulator as x_to_y).
std::vector<double> additive_clock(const SampledPath& xpath, double alpha,
                                   const std::vector<double>& s_points);

struct RoundTripReport {
  /// sup |nu(s) - |x|^alpha A(s)| over the recovered Y grid, in X time.
  double clock_error = 0.0;
  /// 5 delta sup |Y|^alpha over the window.
  double bound = 0.0;
  std::size_t points = 0;
  /// Recovered values that match none of Y at the neighbouring path nodes.
  std::size_t value_mismatches = 0;
  bool pass() const { return clock_error <= bound && value_mismatches == 0; }
};

/// y_to_x on the X images of the path nodes in [0, window], then x_to_y with
/// step delta, compared against the path itself.
RoundTripReport round_trip_check(std::shared_ptr<const LogPath> path, double x, double alpha, double delta,
                                 double window);

struct HittingTimeEstimate {
  double estimate = 0.0;
  bool converged = false;
  std::size_t terms = 0;
  std::vector<double> partial_sums;
};

/// Partial sums H_n = |x|^alpha A(T_n) over the completed segments of path.
HittingTimeEstimate hitting_time(const LogPath& path, double x, double alpha, std::size_t n_max = 10000,
                                 double tol = 1e-6);

/// Same functional with segments simulated on demand from root.
HittingTimeEstimate hitting_time(const LKSimulator& sim, double x, double alpha, double step,
                                 const RngStream& root, std::size_t n_max = 10000, double tol = 1e-6);

struct MarginalOptions {
  double initial_horizon = 1.0;
  double max_horizon = 1e4;
  /// A path whose |Y| falls below kill_level * |x| at the horizon is treated as dead.
  double kill_level = 1e-8;
};

/// X^{(x)}_t at each of the increasing times, extending the Y horizon as
/// needed. Dead paths report 0.
std::vector<double> sample_x_marginals(const LKSimulator& sim, double x, double alpha,
                                       const std::vector<double>& times, double step,
                                       const RngStream& root, const MarginalOptions& opt = {});

}  // namespace lk
