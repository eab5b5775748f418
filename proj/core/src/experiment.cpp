#include "lk/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lk/errors.hpp"
#include "lk/generators.hpp"
#include "lk/plot.hpp"
#include "lk/quadrature.hpp"
#include "lk/small_time.hpp"
#include "lk/verify.hpp"

namespace lk {

using json = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
  if (!preset.empty()) StableModel::preset(preset);
  if (model) model->validate();
  if (alpha && !(*alpha > 0.0 && *alpha <= 2.0)) throw ConfigError("alpha must lie in (0, 2]");
  if (x0 == 0.0 || !std::isfinite(x0)) throw ConfigError("x0 must be finite and nonzero");
  if (dt && !(*dt > 0.0)) throw ConfigError("dt must be positive");
  if (horizon && !(*horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (replicas && *replicas < 1) throw ConfigError("replicas must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

StableModel ExperimentConfig::model_or(const std::string& fallback) const {
  if (model) return *model;
  if (!preset.empty()) return StableModel::preset(preset);
  if (alpha) {
    StableModel m;
    m.params = StableParams::symmetric_normalized(*alpha);
    m.flavor = *alpha == 2.0 ? Flavor::Brownian : Flavor::KilledAtZero;
    return m;
  }
  return StableModel::preset(fallback);
}

ExperimentConfig experiment_from_config(const io::Config& cfg) {
  const std::string s = "experiment";
  ExperimentConfig c;
  c.suite = cfg.get_or(s, "suite", c.suite);
  c.preset = cfg.get_or(s, "preset", "");
  if (cfg.has(s, "alpha")) c.alpha = cfg.get_double(s, "alpha");
  c.x0 = cfg.get_double_or(s, "x0", c.x0);
  if (cfg.has(s, "dt")) c.dt = cfg.get_double(s, "dt");
  if (cfg.has(s, "horizon")) c.horizon = cfg.get_double(s, "horizon");
  auto count = [&](const std::string& key) {
    double v = cfg.get_double(s, key);
    if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError("'" + key + "' must be a nonnegative integer");
    return v;
  };
  if (cfg.has(s, "replicas")) c.replicas = static_cast<std::size_t>(count("replicas"));
  if (cfg.has(s, "seed")) c.seed = static_cast<std::uint64_t>(count("seed"));
  if (cfg.has(s, "threads")) c.threads = static_cast<unsigned>(count("threads"));
  c.out_dir = cfg.get_or(s, "out", "");
  if (cfg.sections().count("model")) c.model = io::model_from_config(cfg);
  c.validate();
  return c;
}

const CheckEntry* ExperimentReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ExperimentReport::summary_json() const {
  json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["pass"] = pass;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["required"] = c.required;
    e["result"] = json::parse(c.json);
    j["checks"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string ExperimentReport::table() const {
  std::string out;
  for (const auto& c : checks) {
    out += c.required ? (c.pass ? "PASS " : "FAIL ") : "INFO ";
    out += c.name + " " + c.json + "\n";
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

// Stream ids: one block of 2^32 replicas per check so checks never share draws.
std::uint64_t stream(std::uint64_t check, std::uint64_t i) { return (check << 32) | i; }

void add(ExperimentReport& r, std::string name, bool pass, const json& j, bool required = true) {
  r.checks.push_back({std::move(name), pass, required, j.dump()});
}

void add_ks(ExperimentReport& r, const std::string& name, const KSResult& k, bool required = true) {
  add(r, name, k.pass, json::parse(io::ks_json(name, k)), required);
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  return io::csv(header, rows);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

StableParams stable_of(const StableModel& m) {
  if (m.flavor == Flavor::Brownian) throw ConfigError("suite needs a stable model, not brownian");
  return m.params;
}

void require_killed(const StableModel& m, const std::string& suite) {
  if (m.flavor != Flavor::KilledAtZero) throw ConfigError(suite + " needs a killed stable model");
}

// ---------------------------------------------------------------------------
// smoke

ExperimentReport suite_smoke(const ExperimentConfig& c) {
  ExperimentReport r;
  StableModel m = c.model_or("brownian");
  const double al = m.params.alpha;
  const double step = c.dt.value_or(1e-3);
  const double horizon = c.horizon.value_or(1.0);
  const std::size_t n = c.replicas.value_or(10);
  LKSimulator sim(build_lk(m));
  const int sign = c.x0 > 0.0 ? 1 : -1;

  std::vector<RoundTripReport> trips(n);
  std::vector<std::size_t> y_flips(n), x_flips(n);
  std::vector<std::string> first(4);
  parallel_for(n, c.threads, [&](std::size_t i) {
    auto path = std::make_shared<const LogPath>(sim.simulate(sign, horizon, step, RngStream(c.seed, stream(1, i))));
    trips[i] = round_trip_check(path, c.x0, al, step, horizon);
    ExponentialFunctional A(*path, al);
    auto grid = uniform_grid(0.0, 0.999 * std::pow(std::abs(c.x0), al) * A.total(), 201);
    auto x = y_to_x(path, c.x0, al, grid);
    x_flips[i] = x.samples.flip_indices.size();
    y_flips[i] = path->flip_count(std::min(horizon, x.table_s.back()));
    if (i == 0) {
      first[0] = io::log_path_json(*path);
      first[1] = io::sampled_path_csv(x.samples, "x");
      first[2] = io::sampled_path_csv(x_to_y(x.samples, al, step), "y");
    }
  });
  bool ok_trip = true, ok_flips = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ok_trip = ok_trip && trips[i].pass();
    worst = std::max(worst, trips[i].clock_error / trips[i].bound);
    ok_flips = ok_flips && x_flips[i] <= y_flips[i];
  }
  add(r, "round-trip", ok_trip, json{{"flavor", flavor_name(m.flavor)},
                                     {"replicas", n}, {"worst_ratio", worst}});
  add(r, "flip-count", ok_flips, json{{"replicas", n}});
  r.artifacts["log_path_0.json"] = first[0];
  r.artifacts["x_path_0.csv"] = first[1];
  r.artifacts["y_path_0.csv"] = first[2];
  return r;
}

// ---------------------------------------------------------------------------
// criteria 1 and 2: sign changes of direct stable paths

ExperimentReport suite_flips(const ExperimentConfig& c, bool ratio_required, bool clock_required) {
  ExperimentReport r;
  StableModel m = c.model_or("stable-killed-sym-1.5");
  StableParams p = stable_of(m);
  SelfSimilarOptions opt;
  opt.h = c.dt.value_or(1e-4);
  opt.max_flips = 8;
  const std::size_t n = c.replicas.value_or(500);
  std::vector<FlipDecomposition> decs(n);
  std::vector<char> complete(n);
  parallel_for(n, c.threads, [&](std::size_t i) {
    RngStream rng(c.seed, stream(2, i));
    auto seq = simulate_stable_flips(p, c.x0, opt, rng);
    complete[i] = seq.complete;
    decs[i] = decompose_flips(seq);
  });
  std::vector<double> J, clocks;
  std::vector<std::vector<double>> rows;
  std::size_t incomplete = 0;
  bool negative = true;
  for (std::size_t i = 0; i < n; ++i) {
    incomplete += complete[i] ? 0 : 1;
    const auto& d = decs[i];
    for (std::size_t k = 0; k < d.flips(); ++k) {
      negative = negative && d.ratios[k] < 0.0;
      J.push_back(-d.ratios[k]);
      // Excursions from the positive side end at rate c-/alpha, from the negative side at c+/alpha.
      double rate = (d.starts[k] > 0.0 ? p.c_minus : p.c_plus) / p.alpha;
      clocks.push_back(d.clocks[k] * rate);
      rows.push_back({static_cast<double>(i), static_cast<double>(k + 1), d.flip_times[k], d.ratios[k], d.clocks[k]});
    }
  }
  add(r, "ratios-negative-and-complete", negative && incomplete == 0, json{{"flips", J.size()}, {"incomplete_replicas", incomplete}});
  add_ks(r, "pareto-ratio", ks_one_sample(J, [&](double x) { return pareto_cdf(p.alpha, x); }), ratio_required);
  add_ks(r, "flip-clock", ks_one_sample(clocks, [](double x) { return exponential_cdf(1.0, x); }), clock_required);
  auto probe = independence_probe(J, 1);
  add(r, "ratio-lag1-independence", std::abs(probe.z) <= 3.0,
      json{{"rho", probe.rho}, {"z", probe.z}, {"n", probe.n}}, false);
  r.artifacts["flips.csv"] = csv_text({"replica", "n", "H", "J", "clock"}, rows);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 3: scaling of marginals

SamplerConfig coarse_sampler() {
  SamplerConfig s;
  s.epsilon = 0.03;
  return s;
}

ExperimentReport suite_scaling(const ExperimentConfig& c) {
  ExperimentReport r;
  StableModel m = c.model_or("stable-killed-sym-1.5");
  require_killed(m, "scaling");
  const double al = m.params.alpha;
  const double step = c.dt.value_or(0.01);
  const std::size_t n = c.replicas.value_or(10000);
  const double k = 2.0;
  LKSimulator sim(build_lk(m), coarse_sampler());
  std::vector<double> a(n), b(n);
  parallel_for(n, c.threads, [&](std::size_t i) {
    a[i] = k * sample_x_marginals(sim, c.x0, al, {std::pow(k, -al)}, step, RngStream(c.seed, stream(3, i)))[0];
    b[i] = sample_x_marginals(sim, k * c.x0, al, {1.0}, step, RngStream(c.seed, stream(4, i)))[0];
  });
  add_ks(r, "scaling", ks_two_sample(a, b));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({a[i], b[i]});
  r.artifacts["scaling.csv"] = csv_text({"scaled", "direct"}, rows);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 4: round trip

ExperimentReport suite_round_trip(const ExperimentConfig& c) {
  ExperimentReport r;
  std::vector<std::string> presets = {"stable-killed-sym-1.5", "stable-cond-1.5", "brownian"};
  std::vector<StableModel> models;
  if (c.model || !c.preset.empty() || c.alpha) {
    presets = {c.model ? std::string(flavor_name(c.model->flavor)) : !c.preset.empty() ? c.preset : "alpha"};
    models = {c.model_or("")};
  } else {
    for (const auto& name : presets) models.push_back(StableModel::preset(name));
  }
  const double step = c.dt.value_or(1e-3);
  const double window = c.horizon.value_or(1.0);
  const std::size_t n = c.replicas.value_or(20);
  const int sign = c.x0 > 0.0 ? 1 : -1;
  std::string table = "preset,replica,clock_error,bound,points,mismatches\n";
  for (std::size_t pi = 0; pi < presets.size(); ++pi) {
    const StableModel& m = models[pi];
    LKSimulator sim(build_lk(m));
    std::vector<RoundTripReport> reps(n);
    parallel_for(n, c.threads, [&](std::size_t i) {
      auto path = std::make_shared<const LogPath>(
          sim.simulate(sign, 2.0 * window, step, RngStream(c.seed, stream(5 + pi, i))));
      reps[i] = round_trip_check(path, c.x0, m.params.alpha, step, window);
    });
    bool ok = true;
    double worst = 0.0;
    std::size_t mism = 0, pts = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ok = ok && reps[i].pass();
      worst = std::max(worst, reps[i].clock_error / reps[i].bound);
      mism += reps[i].value_mismatches;
      pts += reps[i].points;
      table += presets[pi] + "," + std::to_string(i) + "," + io::fmt(reps[i].clock_error) + "," +
               io::fmt(reps[i].bound) + "," + std::to_string(reps[i].points) + "," +
               std::to_string(reps[i].value_mismatches) + "\n";
    }
    add(r, "round-trip:" + presets[pi], ok,
        json{{"replicas", n}, {"worst_error_over_bound", worst}, {"points", pts}, {"value_mismatches", mism}});
  }
  r.artifacts["round_trip.csv"] = table;
  return r;
}

// ---------------------------------------------------------------------------
// criterion 5: generators against Monte Carlo

ExperimentReport suite_generator(const ExperimentConfig& c) {
  ExperimentReport r;
  StableModel m = c.model_or("stable-killed-sym-1.5");
  require_killed(m, "generator");
  StableParams p = stable_of(m);
  const double t = c.dt.value_or(1e-3);
  const std::size_t n = c.replicas.value_or(1000000);
  const std::vector<double> xs = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  auto battery = default_battery();
  LKCharacteristics chars = build_lk(m);
  std::string lines;
  auto record = [&](const GeneratorReport& g) {
    lines += io::report_json(g) + "\n";
    add(r, g.method + ":" + g.label + "@" + io::fmt(g.x), g.rel_err <= 0.05, json::parse(io::report_json(g)));
  };
  if (p.symmetric()) {
    DirectStableSampler direct(p);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      RngStream rng(c.seed, stream(10, k));
      auto sample = direct.sample(xs[k], t, n, rng);
      for (const auto& f : battery) {
        auto e = mc_generator(f, sample);
        record(GeneratorReport::make(f.name, "killed-generator-vs-direct-mc", xs[k], generator_A0(f, xs[k], p),
                                     e.estimate, e.se));
      }
    }
  }
  LkSmallTimeSampler lk(chars, p.alpha);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    RngStream rng(c.seed, stream(11, k));
    auto sample = lk.sample(xs[k], t, n, rng);
    const double scale = std::pow(std::abs(xs[k]), -p.alpha);
    for (const auto& f : battery) {
      auto e = mc_generator(f, sample);
      record(GeneratorReport::make(f.name, "lk-generator-vs-time-changed-mc", xs[k],
                                   scale * generator_K(f, xs[k], chars), e.estimate, e.se));
    }
  }
  r.artifacts["generator_reports.jsonl"] = lines;
  return r;
}

// ---------------------------------------------------------------------------
// criterion 6

ExperimentReport suite_lemma14(const ExperimentConfig&) {
  ExperimentReport r;
  struct Case {
    double x, alpha, cp, cm;
  };
  const std::vector<Case> cases = {{-1.0, 1.5, 1.0, 0.5}, {0.4, 1.5, 1.0, 0.5},  {-0.4, 1.5, 1.0, 0.5},
                                   {3.0, 1.5, 1.0, 0.5},  {-3.0, 1.5, 1.0, 0.5}, {0.5, 0.7, 2.0, 1.0},
                                   {-2.0, 0.7, 0.3, 1.0}, {2.0, 1.8, 1.0, 3.0},  {-0.25, 1.2, 0.5, 1.5}};
  std::vector<std::vector<double>> rows;
  for (const auto& cs : cases) {
    auto res = lemma14_identity(cs.x, StableParams::make(cs.alpha, cs.cp, cs.cm));
    rows.push_back({cs.x, cs.alpha, cs.cp, cs.cm, res.i1, res.i2, res.closed_form, res.error});
    add(r, "lemma14@x=" + io::fmt(cs.x) + ",alpha=" + io::fmt(cs.alpha), res.error <= 1e-8,
        json{{"x", cs.x}, {"alpha", cs.alpha}, {"c_plus", cs.cp}, {"c_minus", cs.cm}, {"error", res.error}});
  }
  r.artifacts["lemma14.csv"] =
      csv_text({"x", "alpha", "c_plus", "c_minus", "i1", "i2", "closed_form", "error"}, rows);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 7

ExperimentReport suite_h_invariance(const ExperimentConfig& c) {
  ExperimentReport r;
  StableModel m = c.model_or("stable-killed-sym-1.5");
  require_killed(m, "h-invariance");
  const StableParams p = m.params;
  if (!(p.alpha > 1.0 && p.alpha < 2.0)) throw ConfigError("h-invariance needs alpha in (1, 2)");
  const double step = c.dt.value_or(0.01);
  const std::size_t n = c.replicas.value_or(100000);
  const std::vector<double> times = {0.1, 0.5};
  LKSimulator sim(build_lk(m), coarse_sampler());
  std::vector<std::array<double, 2>> w(n);
  parallel_for(n, c.threads, [&](std::size_t i) {
    auto v = sample_x_marginals(sim, c.x0, p.alpha, times, step, RngStream(c.seed, stream(20, i)));
    for (std::size_t k = 0; k < 2; ++k) w[i][k] = h_function(p, v[k]) / h_function(p, c.x0);
  });
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < times.size(); ++k) {
    double s = 0.0, s2 = 0.0;
    for (const auto& v : w) {
      s += v[k];
      s2 += v[k] * v[k];
    }
    const double mean = s / n;
    const double se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / (n - 1.0));
    const double z = (mean - 1.0) / se;
    rows.push_back({times[k], mean, se, z});
    add(r, "h-invariance@t=" + io::fmt(times[k]), std::abs(z) <= 3.0,
        json{{"t", times[k]}, {"mean_ratio", mean}, {"se", se}, {"z", z}, {"n", n}});
  }
  r.artifacts["h_invariance.csv"] = csv_text({"t", "mean_h_ratio", "se", "z"}, rows);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 8

ExperimentReport suite_measures(const ExperimentConfig&) {
  ExperimentReport r;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  std::vector<double> grid;
  for (int i = 0; i < 200; ++i) {
    double y = -6.0 + 12.0 * (i + 0.5) / 200.0;
    grid.push_back(y);
  }
  // Conditioned against killed Lamperti-stable densities.
  for (auto [cp, cm] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.5}}) {
    StableParams p = StableParams::make(1.5, cp, cm);
    if (cp == cm) p = StableParams::symmetric_normalized(1.5);
    for (int sign : {1, -1}) {
      double worst = 0.0;
      for (double y : grid) {
        double zero = levy_density(LampertiStableZero{p, sign}, y);
        double cond = levy_density(LampertiStableCond{p, sign}, y);
        worst = std::max(worst, rel(cond, std::exp((p.alpha - 1.0) * y) * zero));
      }
      add(r, std::string("cond-vs-killed-measure:") + (cp == cm ? "sym" : "asym") + (sign > 0 ? "+" : "-"),
          worst <= 1e-10, json{{"c_plus", p.c_plus}, {"c_minus", p.c_minus}, {"sign", sign}, {"max_rel_err", worst}});
    }
  }
  // Symmetric alpha = 0.5: flip rate times flip-jump density against the compound Poisson part.
  {
    const double al = 0.5;
    StableParams p = StableParams::symmetric_normalized(al);
    auto chars = killed_stable_characteristics(p, 1);
    const double q = chars.levy.killing;
    const double k = k_alpha(al);
    double worst = 0.0;
    for (double u : grid) {
      double pi2 = k * std::exp(u) / std::pow(std::exp(u) + 1.0, al + 1.0);
      worst = std::max(worst, rel(q * jump_density(chars.jump, u), pi2));
    }
    add(r, "flip-measure-vs-pi2", worst <= 1e-10, json{{"alpha", al}, {"q", q}, {"max_rel_err", worst}});
  }
  // Normalization of the flip laws in both coordinates.
  {
    const double al = 1.5;
    quad::Options opt;
    opt.rel_tol = 1e-13;
    auto g0 = [al](double u) { return al * std::pow(1.0 - u, -al - 1.0); };
    auto gc = [al](double u) { return al * std::pow(-u, al - 1.0) * std::pow(1.0 - u, -al - 1.0); };
    auto g = [al](double u) { return jump_density(LogParetoZero{al}, u); };
    double m0 = quad::lower_tail(g0, 0.0, opt);
    double mc = quad::piecewise(gc, -std::numeric_limits<double>::infinity(), 0.0, {-1.0}, opt);
    double mg = quad::piecewise(g, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                                {0.0}, opt);
    add(r, "mass:g0", std::abs(m0 - 1.0) <= 1e-8, json{{"integral", m0}});
    add(r, "mass:g-cond", std::abs(mc - 1.0) <= 1e-8, json{{"integral", mc}});
    add(r, "mass:g", std::abs(mg - 1.0) <= 1e-8, json{{"integral", mg}});
    // The log laws of the library push forward to the multiplicative densities.
    double worst0 = 0.0, worstc = 0.0;
    for (double y : grid) {
      double u = -std::exp(y);
      worst0 = std::max(worst0, rel(jump_density(LogParetoZero{al}, y) / -u, g0(u)));
      worstc = std::max(worstc, rel(jump_density(LogParetoCond{al}, y) / -u, gc(u)));
    }
    add(r, "jump-law-pushforward", std::max(worst0, worstc) <= 1e-10,
        json{{"max_rel_err_killed", worst0}, {"max_rel_err_cond", worstc}});
  }
  return r;
}

// ---------------------------------------------------------------------------
// criterion 9

ExperimentReport suite_parity(const ExperimentConfig& c) {
  ExperimentReport r;
  StableModel m = c.model_or("stable-killed-asym-1.5");
  StableParams p = stable_of(m);
  SelfSimilarOptions opt;
  opt.h = c.dt.value_or(1e-4);
  opt.max_flips = 8;
  const std::size_t per_parity = c.replicas.value_or(1500);
  const std::size_t n = (per_parity + opt.max_flips / 2 - 1) / (opt.max_flips / 2);
  std::vector<FlipDecomposition> decs(n);
  parallel_for(n, c.threads, [&](std::size_t i) {
    RngStream rng(c.seed, stream(30, i));
    decs[i] = decompose_flips(simulate_stable_flips(p, c.x0, opt, rng));
  });
  ExcursionSamples es;
  for (const auto& d : decs) es.add(d);
  SelfSimilarOptions one = opt;
  one.max_flips = 1;
  std::vector<double> ref_same(per_parity), ref_other(per_parity);
  parallel_for(per_parity, c.threads, [&](std::size_t i) {
    RngStream a(c.seed, stream(31, i)), b(c.seed, stream(32, i));
    ref_same[i] = decompose_flips(simulate_stable_flips(p, c.x0, one, a)).excursion_functional(0);
    ref_other[i] = decompose_flips(simulate_stable_flips(p, -c.x0, one, b)).excursion_functional(0);
  });
  add_ks(r, "even-vs-reference", ks_two_sample(es.even, ref_same));
  add_ks(r, "odd-vs-reference", ks_two_sample(es.odd, ref_other));
  add_ks(r, "ratio-parity", ks_two_sample(es.ratios_even, es.ratios_odd));
  add_ks(r, "even-vs-odd", ks_two_sample(es.even, es.odd), false);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < std::min(es.even.size(), es.odd.size()); ++i)
    rows.push_back({es.even[i], es.odd[i], es.ratios_even[i], es.ratios_odd[i]});
  r.artifacts["parity.csv"] = csv_text({"even", "odd", "J_even", "J_odd"}, rows);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 10

ExperimentReport suite_hitting(const ExperimentConfig& c) {
  ExperimentReport r;
  StableModel m = c.model_or("stable-killed-sym-1.5");
  require_killed(m, "hitting");
  const double al = m.params.alpha;
  const double step = c.dt.value_or(0.01);
  const std::size_t n = c.replicas.value_or(1000);
  constexpr std::size_t kLevels = 10;
  constexpr double kTol = 1e-3;
  LKSimulator sim(build_lk(m), coarse_sampler());
  const int sign = c.x0 > 0.0 ? 1 : -1;
  std::vector<std::array<double, kLevels>> mags(n);
  std::vector<HittingTimeEstimate> hits(n);
  parallel_for(n, c.threads, [&](std::size_t i) {
    auto path = sim.simulate_segments(sign, kLevels, step, RngStream(c.seed, stream(40, i)));
    double level = 0.0;
    for (std::size_t k = 0; k < kLevels; ++k) {
      level += path.segments[k].terminal_value + path.segments[k].flip_jump;
      mags[i][k] = std::abs(c.x0) * std::exp(level);
    }
    hits[i] = hitting_time(sim, c.x0, al, step, RngStream(c.seed, stream(41, i)), 10000, kTol);
  });
  std::vector<std::vector<double>> rows;
  std::vector<double> medians;
  for (std::size_t k = 0; k < kLevels; ++k) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = mags[i][k];
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    medians.push_back(v[n / 2]);
    rows.push_back({static_cast<double>(k + 1), v[n / 2]});
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < kLevels; ++k) decreasing = decreasing && medians[k] < medians[k - 1];
  std::size_t converged = 0;
  for (const auto& h : hits) converged += h.converged ? 1 : 0;
  const double frac = static_cast<double>(converged) / n;
  add(r, "median-decreasing", decreasing, json{{"paths", n}, {"medians", medians}});
  add(r, "hitting-time-converged", frac >= 0.95, json{{"paths", n}, {"tol", kTol}, {"converged_fraction", frac}});
  r.artifacts["flip_levels.csv"] = csv_text({"n", "median_abs_X_H"}, rows);
  std::vector<std::vector<double>> hrows;
  for (std::size_t i = 0; i < n; ++i)
    hrows.push_back({static_cast<double>(i), hits[i].estimate, static_cast<double>(hits[i].terms),
                     hits[i].converged ? 1.0 : 0.0});
  r.artifacts["hitting_times.csv"] = csv_text({"replica", "T", "terms", "converged"}, hrows);
  return r;
}

// ---------------------------------------------------------------------------
// criterion 11

ExperimentReport run_suite(const ExperimentConfig& c);

ExperimentReport suite_reproducibility(const ExperimentConfig& c) {
  ExperimentReport r;
  for (const char* name : {"smoke", "round-trip", "lemma14", "measure-identities"}) {
    ExperimentConfig sub = c;
    sub.suite = name;
    sub.out_dir.clear();
    auto a = run_suite(sub);
    auto b = run_suite(sub);
    bool same = a.artifacts == b.artifacts && a.summary_json() == b.summary_json();
    std::size_t bytes = 0;
    for (const auto& [k, v] : a.artifacts) bytes += v.size();
    add(r, std::string("identical:") + name, same, json{{"artifacts", a.artifacts.size()}, {"bytes", bytes}});
  }
  return r;
}

struct SuiteEntry {
  SuiteInfo info;
  ExperimentReport (*fn)(const ExperimentConfig&);
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> reg = {
      {{"smoke", "LK paths, time change and round trip on a small batch"}, suite_smoke},
      {{"pareto-ratio", "flip ratios of direct stable paths against Pareto(alpha)"},
       [](const ExperimentConfig& c) { return suite_flips(c, true, true); }},
      {{"flip-clock", "additive clock between flips against its exponential law"},
       [](const ExperimentConfig& c) { return suite_flips(c, false, true); }},
      {{"scaling", "marginals of k X from x against X from k x"}, suite_scaling},
      {{"round-trip", "y_to_x followed by x_to_y recovers Y"}, suite_round_trip},
      {{"generator", "generator formulas against small-time Monte Carlo"}, suite_generator},
      {{"lemma14", "truncation change identity"}, suite_lemma14},
      {{"h-invariance", "E h(X_t) = h(x) for the killed process"}, suite_h_invariance},
      {{"measure-identities", "Levy measure and flip law identities"}, suite_measures},
      {{"parity", "excursion and ratio laws by parity of the flip index"}, suite_parity},
      {{"hitting", "flip levels decrease and hitting-time partial sums converge"}, suite_hitting},
      {{"reproducibility", "repeated runs give byte-identical artifacts"}, suite_reproducibility},
  };
  return reg;
}

ExperimentReport run_suite(const ExperimentConfig& c) {
  c.validate();
  for (const auto& e : registry()) {
    if (e.info.name != c.suite) continue;
    auto t0 = Clock::now();
    ExperimentReport r = e.fn(c);
    r.suite = c.suite;
    r.seed = c.seed;
    r.pass = true;
    for (const auto& ch : r.checks)
      if (ch.required) r.pass = r.pass && ch.pass;
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
  }
  throw ConfigError("unknown suite '" + c.suite + "'");
}

}  // namespace

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> out = [] {
    std::vector<SuiteInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return out;
}

ExperimentReport run(const ExperimentConfig& config) {
  ExperimentReport r = run_suite(config);
  if (!config.out_dir.empty()) write_artifacts(r, config.out_dir);
  return r;
}

void write_artifacts(const ExperimentReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  for (const auto& [name, content] : report.artifacts) io::write_file(dir + "/" + name, content);
  io::write_file(dir + "/report.json", report.summary_json());
  std::ostringstream log;
  log << "suite " << report.suite << "\nseed " << report.seed << "\nwall_seconds " << report.wall_seconds << "\n"
      << report.table();
  io::write_file(dir + "/run.log", log.str());
}

std::map<std::string, std::string> simulate_artifacts(const ExperimentConfig& c) {
  c.validate();
  StableModel m = c.model_or("stable-killed-sym-1.5");
  const double al = m.params.alpha;
  const double step = c.dt.value_or(1e-3);
  const double horizon = c.horizon.value_or(1.0);
  const std::size_t n = c.replicas.value_or(1);
  LKSimulator sim(build_lk(m));
  std::vector<std::map<std::string, std::string>> parts(n);
  parallel_for(n, c.threads, [&](std::size_t i) {
    auto path = std::make_shared<const LogPath>(
        sim.simulate(c.x0 > 0.0 ? 1 : -1, horizon, step, RngStream(c.seed, stream(50, i))));
    ExponentialFunctional A(*path, al);
    std::vector<double> ys;
    std::vector<double> ts;
    for (double s : A.nodes()) {
      ts.push_back(s);
      ys.push_back(evaluate_Y(*path, c.x0, s));
    }
    auto grid = uniform_grid(0.0, 0.999 * std::pow(std::abs(c.x0), al) * A.total(), 501);
    auto x = y_to_x(path, c.x0, al, grid);
    const std::string id = std::to_string(i);
    parts[i]["log_path_" + id + ".json"] = io::log_path_json(*path);
    parts[i]["y_path_" + id + ".csv"] = io::sampled_path_csv(SampledPath::from(ts, ys), "y");
    parts[i]["x_path_" + id + ".csv"] = io::sampled_path_csv(x.samples, "x");
  });
  std::map<std::string, std::string> out;
  for (auto& p : parts) out.merge(p);
  return out;
}

ExperimentReport decompose_report(const ExperimentConfig& c) {
  c.validate();
  StableModel m = c.model_or("stable-killed-sym-1.5");
  StableParams p = stable_of(m);
  const GridSpec grid = GridSpec::make(c.dt.value_or(1e-3), c.horizon.value_or(10.0));
  const std::size_t n = c.replicas.value_or(1);
  ExperimentReport r;
  r.suite = "decompose";
  r.seed = c.seed;
  std::vector<FlipDecomposition> decs(n);
  SampledPath first;
  parallel_for(n, c.threads, [&](std::size_t i) {
    RngStream rng(c.seed, stream(60, i));
    auto path = simulate_stable_direct(p, c.x0, grid, rng);
    decs[i] = decompose_flips(path, p.alpha);
    if (i == 0) first = std::move(path);
  });
  std::vector<double> J;
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : decs[i].ratios) J.push_back(-v);
    r.artifacts["decomposition_" + std::to_string(i) + ".csv"] = io::decomposition_csv(decs[i]);
  }
  r.artifacts["path_0.csv"] = io::sampled_path_csv(first, "x");
  if (J.size() >= 2) {
    add_ks(r, "pareto-ratio", ks_one_sample(J, [&](double x) { return pareto_cdf(p.alpha, x); }), false);
  }
  add(r, "flips", true, json{{"replicas", n}, {"flips", J.size()}}, false);
  return r;
}

ExperimentReport generator_report(const ExperimentConfig& c) {
  c.validate();
  StableModel m = c.model_or("stable-killed-sym-1.5");
  if (m.flavor == Flavor::Brownian) throw ConfigError("generator needs a stable model");
  ExperimentReport r;
  r.suite = "generator";
  r.seed = c.seed;
  const double x = c.x0;
  const double scale = std::pow(std::abs(x), -m.params.alpha);
  LKCharacteristics chars = build_lk(m);
  std::string lines;
  for (const auto& f : default_battery()) {
    double closed = m.flavor == Flavor::KilledAtZero ? generator_A0(f, x, m.params) : generator_Acond(f, x, m.params);
    double via_k = scale * generator_K(f, x, chars);
    auto g = GeneratorReport::make(f.name, "multiplicative-vs-lk", x, closed, via_k);
    lines += io::report_json(g) + "\n";
    add(r, "formula:" + f.name, g.abs_err <= 1e-6 * std::max(1.0, std::abs(closed)), json::parse(io::report_json(g)));
  }
  if (c.replicas && m.flavor == Flavor::KilledAtZero && m.params.symmetric()) {
    DirectStableSampler direct(m.params);
    RngStream rng(c.seed, stream(70, 0));
    auto sample = direct.sample(x, c.dt.value_or(1e-3), *c.replicas, rng);
    for (const auto& f : default_battery()) {
      auto e = mc_generator(f, sample);
      auto g = GeneratorReport::make(f.name, "direct-mc", x, generator_A0(f, x, m.params), e.estimate, e.se);
      lines += io::report_json(g) + "\n";
      add(r, "mc:" + f.name, g.rel_err <= 0.05, json::parse(io::report_json(g)));
    }
  }
  r.artifacts["generator_reports.jsonl"] = lines;
  r.pass = true;
  for (const auto& ch : r.checks)
    if (ch.required) r.pass = r.pass && ch.pass;
  return r;
}

}  // namespace lk
