#include "lk/small_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lk/errors.hpp"
#include "lk/samplers.hpp"

namespace lk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Random permutation of 0..n-1 driven by the stream (portable across standard libraries).
std::vector<std::size_t> permutation(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(idx[i - 1], idx[std::min(j, i - 1)]);
  }
  return idx;
}

}  // namespace

std::size_t block_begin(std::size_t k, std::size_t n, std::size_t blocks, std::size_t group) {
  if (k >= blocks) return n;
  std::size_t groups = n / group;
  return (k * groups / blocks) * group;
}

// ---------------------------------------------------------------------------
// Direct stable sampler

DirectStableSampler::DirectStableSampler(const StableParams& p, double tilt) : p_(p), tilt_(tilt) {
  p_.validate();
  if (!p_.symmetric() || p_.brownian())
    throw Unsupported("the reflected-pair sampler needs a symmetric stable law with alpha < 2");
  if (!(tilt_ >= 1.0)) throw ParameterError("tilt must be at least 1");
}

SmallTimeSample DirectStableSampler::sample(double x, double t, std::size_t n, RngStream& rng) const {
  if (x == 0.0) throw DomainError("start value must be nonzero");
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  const std::size_t pairs = n / 2;
  if (pairs == 0) throw InsufficientSample("need at least one pair of draws");
  const double k = tilt_;
  const double st = std::pow(t, 1.0 / p_.alpha);
  const double sh = std::pow(t / 2.0, 1.0 / p_.alpha);
  SmallTimeSample out;
  out.x = x;
  out.t = t;
  SmallTimeStratum stratum;
  stratum.group = 2;
  stratum.draws.reserve(2 * pairs);
  for (std::size_t b = 0; b < kDesignBlocks; ++b) {
    const std::size_t lo = block_begin(b, 2 * pairs, kDesignBlocks, 2) / 2;
    const std::size_t m = block_begin(b + 1, 2 * pairs, kDesignBlocks, 2) / 2 - lo;
    auto order = permutation(m, rng);
    for (std::size_t i = 0; i < m; ++i) {
      // The angle's distance to +-pi/2 is pi/2 * r^k, which oversamples large jumps.
      double r = (static_cast<double>(order[i]) + rng.uniform_open()) / static_cast<double>(m);
      double d = 0.5 * std::pow(r, k);
      double v = rng.uniform() < 0.5 ? -kPi / 2.0 + kPi * d : kPi / 2.0 - kPi * d;
      double w = rng.exponential(1.0);
      double s1 = stable_from_angle(p_, 1.0, v, w);
      double weight = k * std::pow(r, k - 1.0);
      stratum.draws.push_back({weight, x + sh * s1, x + st * s1, {}});
      stratum.draws.push_back({weight, x - sh * s1, x - st * s1, {}});
    }
  }
  out.strata.push_back(std::move(stratum));
  return out;
}

// ---------------------------------------------------------------------------
// Lamperti-Kiu sampler

struct LkSmallTimeSampler::Side {
  double q = 0.0;
  double mu = 0.0;
  double var = 0.0;  // sigma^2
  double sigma = 0.0;
  double mid_mean = 0.0;  // int y pi(dy) over the mid band
  double mid_var = 0.0;   // int y^2 pi(dy) over the mid band
  JumpTable mid;
  JumpTable big;
  JumpLaw law = Degenerate{0.0};

  double rare() const { return q + big.rate(); }
};

namespace {

std::unique_ptr<LkSmallTimeSampler::Side> build_side(const SignCharacteristics& sc,
                                                     const LkSmallTimeOptions& opt) {
  auto side = std::make_unique<LkSmallTimeSampler::Side>();
  const LevySpec& spec = sc.levy;
  side->q = spec.killing;
  side->law = sc.jump;
  auto approx = small_jump_approx(spec, opt.small_cut, true);
  side->mu = approx.drift;
  side->sigma = approx.sigma;
  side->var = approx.sigma * approx.sigma;
  if (!is_zero_measure(spec.measure)) {
    side->mid = JumpTable(spec.measure, opt.small_cut, opt.rare_cut);
    side->big = JumpTable(spec.measure, opt.rare_cut, kInf);
    auto y = [](double v) { return v; };
    auto y2 = [](double v) { return v * v; };
    const auto& m = spec.measure;
    side->mid_mean = measure_integral(m, y, -opt.rare_cut, -opt.small_cut) +
                     measure_integral(m, y, opt.small_cut, opt.rare_cut);
    side->mid_var = measure_integral(m, y2, -opt.rare_cut, -opt.small_cut) +
                    measure_integral(m, y2, opt.small_cut, opt.rare_cut);
  }
  return side;
}

}  // namespace

LkSmallTimeSampler::LkSmallTimeSampler(const LKCharacteristics& chars, double alpha,
                                       const LkSmallTimeOptions& opt)
    : chars_(chars), alpha_(alpha), opt_(opt) {
  chars_.validate();
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (!(opt.small_cut > 0.0 && opt.rare_cut > opt.small_cut))
    throw ConfigError("need 0 < small_cut < rare_cut");
  if (opt.pieces_per_h < 2) throw ConfigError("pieces_per_h must be at least 2");
  if (!(opt.rare_share > 0.0 && opt.rare_share < 1.0)) throw ConfigError("rare_share must be in (0, 1)");
  if (!(opt.flip_share > 0.0 && opt.flip_share < 1.0)) throw ConfigError("flip_share must be in (0, 1)");
  plus_ = build_side(chars_.plus, opt_);
  minus_ = build_side(chars_.minus, opt_);
}

LkSmallTimeSampler::~LkSmallTimeSampler() = default;

namespace {

struct RareEvent {
  double time = 0.0;
  bool flip = false;
  double u = 0.5;  // quantile of the jump size or flip jump
};

// Values of the path at one target of the additive clock, with the
// martingale controls of the jump part and the Gaussian part.
struct TargetValue {
  double x = 0.0;
  double jump_ctrl = 0.0;
  double jump_sq = 0.0;
  double gauss_ctrl = 0.0;
  double gauss_sq = 0.0;
};

std::array<double, kMaxControls> controls(const std::array<TargetValue, 2>& tv) {
  return {tv[1].jump_ctrl, tv[1].jump_sq, tv[1].gauss_ctrl, tv[1].gauss_sq,
          tv[0].jump_ctrl, tv[0].jump_sq, tv[0].gauss_ctrl, tv[0].gauss_sq};
}

}  // namespace

SmallTimeSample LkSmallTimeSampler::sample(double x, double t, std::size_t n, RngStream& rng) const {
  if (x == 0.0) throw DomainError("start value must be nonzero");
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  const double al = alpha_;
  const double h = t * std::pow(std::abs(x), -al);
  const int s0 = sgn(x);
  const Side& first = s0 > 0 ? *plus_ : *minus_;
  const double rate = first.rare();
  const double p_rare = rate > 0.0 ? -std::expm1(-2.0 * h * rate) : 0.0;
  const double delta = h / static_cast<double>(opt_.pieces_per_h);

  // Runs one path until the clock passes t; forced is the first rare event
  // (rare stratum) or null (calm stratum, no rare event before 2h).
  auto run = [&](const RareEvent* forced, std::array<TargetValue, 2>& out) {
    int s = s0;
    const Side* side = &first;
    double parity = 1.0;
    double u = 0.0;
    double gauss = 0.0, jumps = 0.0, other = 0.0;  // Gaussian part, mid jumps, rare events
    double comp_g = 0.0, comp_gv = 0.0, comp_j = 0.0, comp_jv = 0.0;
    double A = 0.0;
    std::size_t node = 0;
    const double targets[2] = {h / 2.0, h};
    int j = 0;
    double next_mid = side->mid.empty() ? kInf : rng.exponential(side->mid.rate());
    double next_rare = forced ? forced->time : 2.0 * h + (rate > 0.0 ? rng.exponential(rate) : kInf);
    bool pending = forced != nullptr;
    std::size_t pieces = 0;
    auto record = [&](int k, double xval, double tau, double g_end, double tau_end) {
      TargetValue& tv = out[static_cast<std::size_t>(k)];
      tv.x = xval;
      double cj = jumps - (comp_j + side->mid_mean * (tau - u));
      tv.jump_ctrl = cj;
      tv.jump_sq = cj * cj - (comp_jv + side->mid_var * (tau - u));
      double cg = g_end - (comp_g + side->mu * (tau_end - u));
      tv.gauss_ctrl = cg;
      tv.gauss_sq = cg * cg - (comp_gv + side->var * (tau_end - u));
    };
    while (j < 2) {
      double grid_next = static_cast<double>(node + 1) * delta;
      double end = std::min({grid_next, next_mid, next_rare});
      double d = end - u;
      if (d > 0.0) {
        double inc = side->mu * d + side->sigma * std::sqrt(d) * rng.normal();
        double ell = gauss + jumps + other;
        double e0 = std::exp(al * ell);
        double ai = al * inc;
        double dA = e0 * d * (std::abs(ai) < 1e-10 ? 1.0 + 0.5 * ai : std::expm1(ai) / ai);
        while (j < 2 && A + dA >= targets[j]) {
          double r = targets[j] - A;
          double slope = inc / d;
          double z = al * slope * r / e0;
          double v = std::abs(z) < 1e-12 ? r / e0 : std::log1p(z) / (al * slope);
          v = std::clamp(v, 0.0, d);
          double bridge = side->sigma * std::sqrt(v * (d - v) / d) * rng.normal();
          record(j, x * parity * std::exp(ell + slope * v + bridge), u + v, gauss + inc, end);
          ++j;
        }
        A += dA;
        gauss += inc;
        comp_g += side->mu * d;
        comp_gv += side->var * d;
        comp_j += side->mid_mean * d;
        comp_jv += side->mid_var * d;
        u = end;
      }
      if (j == 2) break;
      if (end == grid_next) ++node;
      if (end == next_mid) {
        jumps += side->mid.sample(rng.uniform());
        next_mid = u + rng.exponential(side->mid.rate());
      }
      if (end == next_rare) {
        bool flip;
        double q_u;
        if (pending) {
          flip = forced->flip;
          q_u = forced->u;
          pending = false;
        } else {
          flip = rng.uniform() * side->rare() < side->q;
          q_u = rng.uniform();
        }
        if (flip) {
          other += jump_quantile(side->law, std::clamp(q_u, 1e-300, 1.0 - 1e-16));
          s = -s;
          parity = -parity;
          side = s > 0 ? plus_.get() : minus_.get();
          next_mid = side->mid.empty() ? kInf : u + rng.exponential(side->mid.rate());
        } else {
          other += side->big.sample(q_u);
        }
        next_rare = side->rare() > 0.0 ? u + rng.exponential(side->rare()) : kInf;
      }
      // |Y| this far below |x| cannot accumulate the remaining clock: the path is dead.
      if (++pieces > opt_.max_pieces || al * (gauss + jumps + other) < -700.0) {
        for (; j < 2; ++j) record(j, 0.0, u, gauss, u);
        break;
      }
    }
  };

  SmallTimeSample out;
  out.x = x;
  out.t = t;
  std::size_t n_rare = p_rare > 0.0 ? static_cast<std::size_t>(opt_.rare_share * static_cast<double>(n)) : 0;
  const std::size_t n_calm = n - n_rare;

  std::array<TargetValue, 2> tv;
  SmallTimeStratum calm;
  calm.probability = 1.0 - p_rare;
  calm.n_controls = kMaxControls;
  calm.draws.reserve(n_calm);
  for (std::size_t i = 0; i < n_calm; ++i) {
    run(nullptr, tv);
    calm.draws.push_back({1.0, tv[0].x, tv[1].x, controls(tv)});
  }
  out.strata.push_back(std::move(calm));

  if (n_rare > 0) {
    const double flip_prob = first.q / rate;
    // The first rare event falls in one of three Y-time windows, each its own
    // stratum; within a window and block the first draws propose a flip, the
    // rest a large jump, and the event time and size come from independently
    // permuted strata.
    const double edges[4] = {0.0, 0.5 * h, h, 2.0 * h};
    const double shares[3] = {0.4, 0.4, 0.2};
    std::size_t used = 0;
    for (int w = 0; w < 3; ++w) {
      const double lo_t = edges[w], hi_t = edges[w + 1];
      const double p_lo = -std::expm1(-rate * lo_t);
      const double p_hi = -std::expm1(-rate * hi_t);
      const std::size_t nw =
          w == 2 ? n_rare - used : static_cast<std::size_t>(shares[w] * static_cast<double>(n_rare));
      used += nw;
      SmallTimeStratum rare;
      rare.probability = p_hi - p_lo;
      rare.n_controls = kMaxControls;
      rare.draws.reserve(nw);
      auto group = [&](std::size_t m, bool flip, double weight) {
        if (m == 0) return;
        auto pt = permutation(m, rng);
        auto pu = permutation(m, rng);
        const double dm = static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
          RareEvent ev;
          double ut = (static_cast<double>(pt[i]) + rng.uniform_open()) / dm;
          ev.time = -std::log1p(-(p_lo + ut * (p_hi - p_lo))) / rate;
          ev.time = std::clamp(ev.time, lo_t, hi_t);
          ev.flip = flip;
          ev.u = (static_cast<double>(pu[i]) + rng.uniform_open()) / dm;
          run(&ev, tv);
          rare.draws.push_back({weight, tv[0].x, tv[1].x, controls(tv)});
        }
      };
      for (std::size_t b = 0; b < kDesignBlocks; ++b) {
        const std::size_t m = block_begin(b + 1, nw, kDesignBlocks) - block_begin(b, nw, kDesignBlocks);
        if (m == 0) continue;
        std::size_t n_flip = 0;
        if (flip_prob >= 1.0) {
          n_flip = m;
        } else if (flip_prob > 0.0 && m > 1) {
          n_flip = static_cast<std::size_t>(std::llround(opt_.flip_share * static_cast<double>(m)));
          n_flip = std::clamp<std::size_t>(n_flip, 1, m - 1);
        }
        const double dm = static_cast<double>(m);
        group(n_flip, true, n_flip > 0 ? flip_prob * dm / static_cast<double>(n_flip) : 0.0);
        group(m - n_flip, false, m > n_flip ? (1.0 - flip_prob) * dm / static_cast<double>(m - n_flip) : 0.0);
      }
      out.strata.push_back(std::move(rare));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Estimation

namespace {

using Controls = std::array<double, kMaxControls>;

// Least-squares coefficients of y on the first nc columns of c (both centered).
// Near-singular directions get a zero coefficient.
Controls regression_coefficients(const std::vector<double>& y, const std::vector<Controls>& c, std::size_t nc) {
  Controls beta{};
  const std::size_t n = y.size();
  if (nc == 0 || n <= nc + 1) return beta;
  const double dn = static_cast<double>(n);
  double ybar = std::accumulate(y.begin(), y.end(), 0.0) / dn;
  Controls cbar{};
  for (const auto& row : c)
    for (std::size_t k = 0; k < nc; ++k) cbar[k] += row[k];
  for (std::size_t k = 0; k < nc; ++k) cbar[k] /= dn;
  // Normal equations S beta = b, solved by Gauss-Jordan elimination with partial pivoting.
  double S[kMaxControls][kMaxControls + 1] = {};
  for (std::size_t i = 0; i < n; ++i) {
    double dy = y[i] - ybar;
    for (std::size_t a = 0; a < nc; ++a) {
      double ca = c[i][a] - cbar[a];
      for (std::size_t b = 0; b < nc; ++b) S[a][b] += ca * (c[i][b] - cbar[b]);
      S[a][nc] += ca * dy;
    }
  }
  double scale = 0.0;
  for (std::size_t a = 0; a < nc; ++a) scale = std::max(scale, S[a][a]);
  if (!(scale > 0.0)) return beta;
  // Column scaling keeps the pivot test meaningful for controls of very different size.
  Controls norm{};
  for (std::size_t a = 0; a < nc; ++a) norm[a] = S[a][a] > 0.0 ? 1.0 / std::sqrt(S[a][a]) : 0.0;
  for (std::size_t a = 0; a < nc; ++a) {
    for (std::size_t b = 0; b < nc; ++b) S[a][b] *= norm[a] * norm[b];
    S[a][nc] *= norm[a];
  }
  std::array<bool, kMaxControls> active{};
  std::array<std::size_t, kMaxControls> piv_row{};
  for (std::size_t col = 0, row = 0; col < nc; ++col) {
    std::size_t best = row;
    for (std::size_t r = row; r < nc; ++r)
      if (std::abs(S[r][col]) > std::abs(S[best][col])) best = r;
    if (std::abs(S[best][col]) < 1e-10) continue;
    for (std::size_t k = 0; k <= nc; ++k) std::swap(S[row][k], S[best][k]);
    for (std::size_t r = 0; r < nc; ++r) {
      if (r == row) continue;
      double fct = S[r][col] / S[row][col];
      for (std::size_t k = 0; k <= nc; ++k) S[r][k] -= fct * S[row][k];
    }
    active[col] = true;
    piv_row[col] = row;
    ++row;
  }
  for (std::size_t col = 0; col < nc; ++col)
    if (active[col]) beta[col] = norm[col] * S[piv_row[col]][nc] / S[piv_row[col]][col];
  return beta;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe m;
  const double n = static_cast<double>(v.size());
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return m;
}

}  // namespace

McGeneratorEstimate mc_generator(const TestFunction& f, const SmallTimeSample& sample, std::size_t batches) {
  if (batches < 2) throw ConfigError("need at least two batches");
  const double t = sample.t;
  const double fx = f(sample.x);
  std::vector<double> bt(batches, 0.0), bh(batches, 0.0), be(batches, 0.0);
  std::size_t total = 0;
  for (const auto& st : sample.strata) {
    const std::size_t n = st.draws.size();
    total += n;
    if (n < 2 * batches) throw InsufficientSample("stratum has too few draws for the batch count");
    std::vector<double> yt(n), yh(n), ye(n);
    std::vector<Controls> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = st.draws[i];
      yt[i] = d.weight * (f(d.x_t) - fx) / t;
      yh[i] = d.weight * (f(d.x_half) - fx) / (t / 2.0);
      ye[i] = 2.0 * yh[i] - yt[i];
      for (std::size_t k = 0; k < st.n_controls; ++k) c[i][k] = d.weight * d.controls[k];
    }
    // One fit per stratum; the batches then average the adjusted responses.
    const Controls beta_t = regression_coefficients(yt, c, st.n_controls);
    const Controls beta_h = regression_coefficients(yh, c, st.n_controls);
    const Controls beta_e = regression_coefficients(ye, c, st.n_controls);
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = block_begin(b, n, batches, st.group);
      const std::size_t hi = block_begin(b + 1, n, batches, st.group);
      double st_t = 0.0, st_h = 0.0, st_e = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        double at = yt[i], ah = yh[i], ae = ye[i];
        for (std::size_t k = 0; k < st.n_controls; ++k) {
          at -= beta_t[k] * c[i][k];
          ah -= beta_h[k] * c[i][k];
          ae -= beta_e[k] * c[i][k];
        }
        st_t += at;
        st_h += ah;
        st_e += ae;
      }
      const double m = static_cast<double>(hi - lo);
      bt[b] += st.probability * st_t / m;
      bh[b] += st.probability * st_h / m;
      be[b] += st.probability * st_e / m;
    }
  }
  McGeneratorEstimate out;
  auto mt = mean_se(bt), mh = mean_se(bh), me = mean_se(be);
  out.at_t = mt.mean;
  out.se_t = mt.se;
  out.at_half = mh.mean;
  out.se_half = mh.se;
  out.estimate = me.mean;
  out.se = me.se;
  out.n = total;
  return out;
}

McGeneratorEstimate mc_generator(const TestFunction& f, double x, const SmallTimeSampler& sampler,
                                 double t, std::size_t n, RngStream& rng, std::size_t batches) {
  return mc_generator(f, sampler.sample(x, t, n, rng), batches);
}

GeneratorReport volkonskii_check(const TestFunction& f, double x, const LKCharacteristics& chars,
                                 double alpha, double t, std::size_t n, RngStream& rng,
                                 const LkSmallTimeOptions& opt) {
  double formula = std::pow(std::abs(x), -alpha) * generator_K(f, x, chars);
  LkSmallTimeSampler sampler(chars, alpha, opt);
  auto mc = mc_generator(f, x, sampler, t, n, rng);
  return GeneratorReport::make(f.name, "volkonskii", x, formula, mc.estimate, mc.se);
}

}  // namespace lk
