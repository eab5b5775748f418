#include "lk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lk/errors.hpp"

namespace lk {

double FlipDecomposition::excursion_functional(std::size_t n) const {
  return std::log(std::abs(ends.at(n) / starts.at(n)));
}

FlipDecomposition decompose_flips(const SampledPath& path, double alpha, bool keep_excursions) {
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  FlipDecomposition d;
  if (path.flip_indices.empty()) return d;
  const auto& t = path.times;
  const auto& v = path.values;
  std::size_t begin = 0;  // grid index where the current excursion starts
  double clock = 0.0;
  std::size_t next_flip = 0;
  for (std::size_t k = 0; k + 1 < v.size() && next_flip < path.flip_indices.size(); ++k) {
    clock += (t[k + 1] - t[k]) * std::pow(std::abs(v[k]), -alpha);
    if (k != path.flip_indices[next_flip]) continue;
    d.flip_times.push_back(t[k]);
    d.ratios.push_back(v[k + 1] / v[k]);
    d.clocks.push_back(clock);
    d.starts.push_back(v[begin]);
    d.ends.push_back(v[k]);
    if (keep_excursions) {
      double scale = std::abs(v[begin]);
      double rate = std::pow(scale, -alpha);
      std::vector<double> et, ev;
      for (std::size_t i = begin; i <= k; ++i) {
        et.push_back((t[i] - t[begin]) * rate);
        ev.push_back(v[i] / scale);
      }
      d.excursions.push_back(SampledPath::from(std::move(et), std::move(ev)));
    }
    clock = 0.0;
    begin = k + 1;
    ++next_flip;
  }
  return d;
}

FlipDecomposition decompose_flips(const FlipSequence& seq) {
  FlipDecomposition d;
  double start = seq.x0;
  for (const auto& f : seq.flips) {
    d.flip_times.push_back(f.time);
    d.ratios.push_back(f.after / f.before);
    d.clocks.push_back(f.clock);
    d.starts.push_back(start);
    d.ends.push_back(f.before);
    start = f.after;
  }
  return d;
}

// ---------------------------------------------------------------------------

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double kPi = 3.14159265358979323846;
  if (lambda < 1.0) {
    // Theta-function form, fast for small lambda.
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) {
      double m = 2.0 * k - 1.0;
      s += std::exp(-m * m * kPi * kPi / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * kPi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

KSResult finish(double D, double n_eff, std::size_t n, double level) {
  KSResult r;
  r.statistic = D;
  r.n = n;
  r.level = level;
  r.p_value = kolmogorov_survival(D * std::sqrt(n_eff));
  r.pass = r.p_value > level;
  return r;
}

}  // namespace

KSResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf, double level) {
  const std::size_t n = samples.size();
  if (n < 8) throw InsufficientSample("KS test needs at least 8 samples");
  std::sort(samples.begin(), samples.end());
  const double dn = static_cast<double>(n);
  double D = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double F = cdf(samples[i]);
    D = std::max({D, static_cast<double>(i + 1) / dn - F, F - static_cast<double>(i) / dn});
  }
  return finish(D, dn, n, level);
}

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level) {
  if (a.size() < 8 || b.size() < 8) throw InsufficientSample("KS test needs at least 8 samples per group");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double D = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    D = std::max(D, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return finish(D, na * nb / (na + nb), a.size() + b.size(), level);
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

IndependenceProbe independence_probe(const std::vector<double>& seq, std::size_t lag) {
  if (lag == 0) throw ParameterError("lag must be positive");
  if (seq.size() < lag + 30) throw InsufficientSample("sequence too short for the independence probe");
  const std::size_t n = seq.size() - lag;
  std::vector<double> a(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> b(seq.begin() + static_cast<std::ptrdiff_t>(lag), seq.end());
  auto ra = ranks(a), rb = ranks(b);
  double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(n);
  double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  IndependenceProbe p;
  p.n = n;
  p.rho = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : 0.0;
  p.z = std::sqrt(static_cast<double>(n)) * p.rho;
  return p;
}

void ExcursionSamples::add(const FlipDecomposition& d) {
  for (std::size_t n = 0; n < d.flips(); ++n) {
    (n % 2 == 0 ? even : odd).push_back(d.excursion_functional(n));
    (n % 2 == 0 ? ratios_even : ratios_odd).push_back(d.ratios[n]);
  }
}

ExcursionProbe excursion_law_probe(const ExcursionSamples& samples, const std::vector<double>& reference,
                                   int reference_parity, double level) {
  if (samples.even.size() < 50 || samples.odd.size() < 50)
    throw InsufficientSample("need at least 50 excursions per parity");
  ExcursionProbe out;
  out.parity = ks_two_sample(samples.even, samples.odd, level);
  out.reference = ks_two_sample(reference_parity == 0 ? samples.even : samples.odd, reference, level);
  return out;
}

double pareto_cdf(double alpha, double x) { return x <= 0.0 ? 0.0 : -std::expm1(-alpha * std::log1p(x)); }

double exponential_cdf(double rate, double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); }

}  // namespace lk
