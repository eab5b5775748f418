#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lk/errors.hpp"
#include "lk/experiment.hpp"
#include "lk/io.hpp"
#include "lk/plot.hpp"

namespace {

enum Exit { kPass = 0, kStatFail = 1, kConfigError = 2, kRuntimeError = 3 };

struct Flags {
  std::string config;
  std::string preset;
  std::optional<double> alpha;
  std::optional<double> x0;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::size_t> replicas;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string suite;
  std::optional<unsigned> threads;

  lk::ExperimentConfig resolve() const {
    lk::ExperimentConfig c;
    if (!config.empty()) c = lk::experiment_from_config(lk::io::Config::load(config));
    if (!preset.empty()) {
      c.preset = preset;
      c.model.reset();
    }
    if (alpha) {
      c.alpha = alpha;
      if (preset.empty()) {
        c.preset.clear();
        c.model.reset();
      }
    }
    if (x0) c.x0 = *x0;
    if (dt) c.dt = dt;
    if (horizon) c.horizon = horizon;
    if (replicas) c.replicas = replicas;
    if (seed) c.seed = *seed;
    if (!out.empty()) c.out_dir = out;
    if (!suite.empty()) c.suite = suite;
    if (threads) c.threads = *threads;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* app, Flags& f, bool with_suite) {
  app->add_option("--config", f.config, "config file with [experiment] and [model] sections")
      ->check(CLI::ExistingFile);
  app->add_option("--preset", f.preset, "model preset");
  app->add_option("--alpha", f.alpha, "index of a symmetric killed stable model (2 = Brownian)");
  app->add_option("--x0", f.x0, "start value");
  app->add_option("--dt", f.dt, "time step");
  app->add_option("--horizon", f.horizon, "time horizon");
  app->add_option("--replicas", f.replicas, "number of replicas");
  app->add_option("--seed", f.seed, "root seed");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--threads", f.threads, "worker threads");
  if (with_suite) app->add_option("--suite", f.suite, "suite name, or 'all'");
}

int report_exit(const lk::ExperimentReport& r) {
  std::cout << "== " << r.suite << (r.pass ? " PASS" : " FAIL") << "\n" << r.table();
  std::cout.flush();
  return r.pass ? kPass : kStatFail;
}

int run_suites(lk::ExperimentConfig c, const std::vector<std::string>& names) {
  const std::string root = c.out_dir;
  int code = kPass;
  for (const auto& name : names) {
    c.suite = name;
    if (!root.empty() && names.size() > 1) c.out_dir = root + "/" + name;
    code = std::max(code, report_exit(lk::run(c)));
  }
  return code;
}

void write_all(const std::map<std::string, std::string>& files, const std::string& dir) {
  lk::ExperimentReport r;
  r.artifacts = files;
  lk::write_artifacts(r, dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lamperti-Kiu simulation and verification of self-similar Markov processes"};
  app.require_subcommand(1);

  Flags f;
  auto* simulate = app.add_subcommand("simulate", "simulate LK paths and their time changes");
  add_common(simulate, f, false);

  auto* decompose = app.add_subcommand("decompose", "sign-change decomposition of direct stable paths");
  add_common(decompose, f, false);

  auto* verify = app.add_subcommand("verify", "run the quick verification suites (or --suite)");
  add_common(verify, f, true);

  auto* generator = app.add_subcommand("generator", "generator formulas at --x0; Monte Carlo with --replicas");
  add_common(generator, f, false);

  auto* suite = app.add_subcommand("suite", "run a named suite ('all' runs every suite)");
  add_common(suite, f, true);
  bool list = false;
  suite->add_flag("--list", list, "list the available suites");

  auto* plot = app.add_subcommand("plot", "render an SVG from a CSV artifact");
  std::vector<std::string> inputs;
  std::string kind = "path", column, x_col, y_col, law = "pareto", plot_out, title;
  double law_param = 1.5;
  bool negate = false, log_x = false;
  plot->add_option("--in", inputs, "input CSV; cdf pools several files")->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", kind, "path | cdf | convergence")
      ->check(CLI::IsMember({"path", "cdf", "convergence"}));
  plot->add_option("--out", plot_out, "output SVG (default: input with .svg)");
  plot->add_option("--title", title, "plot title");
  plot->add_option("--column", column, "cdf: sample column (default: last)");
  plot->add_option("--law", law, "cdf: pareto | exponential")->check(CLI::IsMember({"pareto", "exponential"}));
  plot->add_option("--param", law_param, "cdf: Pareto index or exponential rate");
  plot->add_flag("--negate", negate, "cdf: use minus the column (flip ratios are negative)");
  plot->add_option("--x", x_col, "path/convergence: x column (default: first)");
  plot->add_option("--y", y_col, "path/convergence: y column (default: second)");
  plot->add_flag("--log-x", log_x, "convergence: logarithmic x axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*simulate) {
      auto c = f.resolve();
      auto files = lk::simulate_artifacts(c);
      if (!c.out_dir.empty()) write_all(files, c.out_dir);
      for (const auto& [name, content] : files) std::cout << name << " " << content.size() << " bytes\n";
      return kPass;
    }
    if (*decompose) {
      auto c = f.resolve();
      auto r = lk::decompose_report(c);
      if (!c.out_dir.empty()) lk::write_artifacts(r, c.out_dir);
      return report_exit(r);
    }
    if (*generator) {
      auto c = f.resolve();
      auto r = lk::generator_report(c);
      if (!c.out_dir.empty()) lk::write_artifacts(r, c.out_dir);
      std::cout << r.artifacts.at("generator_reports.jsonl");
      return report_exit(r);
    }
    if (*verify) {
      auto c = f.resolve();
      if (!f.suite.empty() && f.suite != "all") return run_suites(c, {f.suite});
      return run_suites(c, {"smoke", "round-trip", "lemma14", "measure-identities"});
    }
    if (*suite) {
      if (list) {
        for (const auto& s : lk::suites()) std::printf("%-20s %s\n", s.name.c_str(), s.description.c_str());
        return kPass;
      }
      if (f.suite.empty()) throw lk::ConfigError("--suite is required (or --list)");
      auto c = f.resolve();
      if (f.suite != "all") return run_suites(c, {f.suite});
      std::vector<std::string> names;
      for (const auto& s : lk::suites()) names.push_back(s.name);
      return run_suites(c, names);
    }
    if (*plot) {
      const std::string& in = inputs.front();
      auto table = lk::plot::parse_csv(lk::io::read_file(in));
      if (table.header.size() < 2 && kind != "cdf") throw lk::ParseError(in + ": need at least two columns");
      const std::string xc = x_col.empty() ? table.header[0] : x_col;
      const std::string yc = y_col.empty() && table.header.size() > 1 ? table.header[1] : y_col;
      std::string svg;
      if (kind == "path") {
        svg = lk::plot::path_svg(lk::SampledPath::from(table.column(xc), table.column(yc)), title.empty() ? in : title);
      } else if (kind == "convergence") {
        svg = lk::plot::convergence_svg(table.column(xc), table.column(yc), title.empty() ? in : title, log_x);
      } else {
        const std::string col = column.empty() ? table.header.back() : column;
        auto xs = table.column(col);
        for (std::size_t i = 1; i < inputs.size(); ++i) {
          auto more = lk::plot::parse_csv(lk::io::read_file(inputs[i])).column(col);
          xs.insert(xs.end(), more.begin(), more.end());
        }
        if (negate)
          for (double& v : xs) v = -v;
        std::function<double(double)> cdf = [&](double x) {
          return law == "pareto" ? lk::pareto_cdf(law_param, x) : lk::exponential_cdf(law_param, x);
        };
        auto o = lk::plot::cdf_overlay_svg(xs, cdf, title.empty() ? in : title);
        std::printf("sup gap D = %s over %zu samples\n", lk::io::fmt(o.sup_gap).c_str(), xs.size());
        svg = o.svg;
      }
      std::string dest = plot_out;
      if (dest.empty()) dest = (in.size() > 4 && in.substr(in.size() - 4) == ".csv" ? in.substr(0, in.size() - 4) : in) + ".svg";
      lk::io::write_file(dest, svg);
      std::cout << "wrote " << dest << "\n";
      return kPass;
    }
  } catch (const lk::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const lk::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kConfigError;
  } catch (const lk::ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kPass;
}
