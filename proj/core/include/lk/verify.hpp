#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lk/stable_models.hpp"
#include "lk/timechange.hpp"

namespace lk {

/// Sign changes of a path and the pieces between them.
///
/// Flip n (n = 1..N) happens at flip_times[n-1] with ratio ratios[n-1] =
/// X_{H_n} / X_{H_n-}. Excursion n (n = 0..N-1) runs from H_n to H_{n+1}
/// (H_0 = 0): it starts at starts[n] = X_{H_n}, ends at ends[n] = X_{H_{n+1}-}
/// and spends clocks[n] = int |X_u|^{-alpha} du of additive clock.
struct FlipDecomposition {
  std::vector<double> flip_times;
  std::vector<double> ratios;
  std::vector<double> clocks;
  std::vector<double> starts;
  std::vector<double> ends;
  /// Rescaled excursions X_{H_n + |X_{H_n}|^alpha t} / |X_{H_n}|, filled on request.
  std::vector<SampledPath> excursions;

  std::size_t flips() const { return flip_times.size(); }
  /// log |X_{H_{n+1}-} / X_{H_n}| of excursion n.
  double excursion_functional(std::size_t n) const;
};

/// Grid-resolved decomposition: H_n is the left grid point of the straddling
/// interval and the adjacent values stand in for X_{H-} and X_H.
FlipDecomposition decompose_flips(const SampledPath& path, double alpha, bool keep_excursions = false);

/// Decomposition of a self-similar stepping run; the clocks are exact step counts.
FlipDecomposition decompose_flips(const FlipSequence& seq);

struct KSResult {
  double statistic = 0.0;
  std::size_t n = 0;
  double p_value = 1.0;
  double level = 0.01;
  bool pass = true;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

KSResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf,
                       double level = 0.01);
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level = 0.01);

struct IndependenceProbe {
  double rho = 0.0;
  double z = 0.0;
  std::size_t n = 0;
};

/// Spearman rank correlation between seq[i] and seq[i + lag], z = sqrt(n) rho.
IndependenceProbe independence_probe(const std::vector<double>& seq, std::size_t lag = 1);

/// Excursion functionals pooled by parity of the excursion index.
struct ExcursionSamples {
  std::vector<double> even;
  std::vector<double> odd;
  /// Flip ratios grouped by the parity of the excursion they end.
  std::vector<double> ratios_even;
  std::vector<double> ratios_odd;

  void add(const FlipDecomposition& d);
};

struct ExcursionProbe {
  KSResult parity;     // even against odd
  KSResult reference;  // the chosen parity against the reference sample
};

/// Compares the excursion functional across parities and against an
/// independently simulated first-excursion sample started from the sign of
/// the chosen parity (0 = even, 1 = odd).
ExcursionProbe excursion_law_probe(const ExcursionSamples& samples, const std::vector<double>& reference,
                                   int reference_parity = 0, double level = 0.01);

/// Pareto CDF 1 - (1 + x)^{-alpha} on x >= 0.
double pareto_cdf(double alpha, double x);
double exponential_cdf(double rate, double x);

}  // namespace lk
