#include <doctest.h>

#include <filesystem>
#include <string>

#include "lk/errors.hpp"
#include "lk/experiment.hpp"
#include "lk/io.hpp"
#include "lk/plot.hpp"

using namespace lk;
using doctest::Approx;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = io::Config::parse(
      "top = 1\n# comment\n[experiment]\nsuite = lemma14\n  seed = 42 \n; other\n[model]\nflavor = conditioned\nalpha "
      "= 1.5\n");
  CHECK(cfg.get("", "top") == "1");
  CHECK(cfg.get("experiment", "suite") == "lemma14");
  CHECK(cfg.get_double("experiment", "seed") == 42.0);
  CHECK(cfg.get_or("experiment", "missing", "x") == "x");
  CHECK_THROWS_AS(cfg.get("experiment", "missing"), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("experiment", "suite"), ConfigError);
  CHECK_THROWS_AS(io::Config::parse("[broken\n"), ParseError);
  CHECK_THROWS_AS(io::Config::parse("novalue\n"), ParseError);
  CHECK_THROWS_AS(io::Config::parse(" = 3\n"), ParseError);

  auto m = io::model_from_config(cfg);
  CHECK(m.flavor == Flavor::ConditionedAvoidZero);
  CHECK(m.params.c() == Approx(1.0));

  auto e = experiment_from_config(cfg);
  CHECK(e.suite == "lemma14");
  CHECK(e.seed == 42);
  REQUIRE(e.model.has_value());
  CHECK(e.model_or("brownian").flavor == Flavor::ConditionedAvoidZero);

  CHECK(io::model_from_config(io::Config::parse("[model]\npreset = brownian\n")).flavor == Flavor::Brownian);
  CHECK(io::model_from_config(io::Config::parse("[model]\nalpha = 1.5\nc_plus = 1\nc_minus = 0.5\n")).params.c_minus ==
        0.5);
  CHECK_THROWS_AS(io::model_from_config(io::Config::parse("[model]\nflavor = odd\nalpha = 1\n")), ConfigError);
  CHECK_THROWS_AS(io::model_from_config(io::Config::parse("[model]\nalpha = 3\n")), ParameterError);
  CHECK_THROWS_AS(experiment_from_config(io::Config::parse("[experiment]\nreplicas = 2.5\n")), ConfigError);
  CHECK_THROWS_AS(experiment_from_config(io::Config::parse("[experiment]\npreset = nope\n")), ConfigError);
  CHECK_THROWS_AS(experiment_from_config(io::Config::parse("[experiment]\nx0 = 0\n")), ConfigError);
}

TEST_CASE("csv output") {
  CHECK(io::fmt(0.1) == "0.1");
  CHECK(io::fmt(-2.0) == "-2");
  std::string text = io::csv({"a", "b"}, {{1.0, 0.25}, {-3.0, 1e-20}});
  CHECK(text == "a,b\n1,0.25\n-3,1e-20\n");
  CHECK_THROWS_AS(io::csv({"a"}, {{1.0, 2.0}}), ParameterError);

  auto t = plot::parse_csv(text);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.column("b") == std::vector<double>{0.25, 1e-20});
  CHECK_THROWS_AS(t.column("c"), ParseError);
  CHECK_THROWS_AS(plot::parse_csv(""), ParseError);
  try {
    plot::parse_csv("a,b\n1,2\n3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(plot::parse_csv("a\nx\n"), ParseError);
}

TEST_CASE("plots") {
  auto path = SampledPath::from({0, 1, 2, 3, 4}, {1.0, -1.0, -0.5, 0.5, -2.0});
  std::string svg = plot::path_svg(path, "a <path>");
  CHECK(count(svg, "class=\"flip\"") == 3);
  CHECK(svg.find("sign changes: 3") != std::string::npos);
  CHECK(svg.find("a &lt;path&gt;") != std::string::npos);
  CHECK(svg.find(plot::kGenerator) != std::string::npos);

  std::vector<double> xs;
  RngStream rng(1);
  for (int i = 0; i < 500; ++i) xs.push_back(rng.exponential(1.0));
  auto cdf = [](double x) { return exponential_cdf(1.0, x); };
  auto o = plot::cdf_overlay_svg(xs, cdf, "exp");
  CHECK(o.sup_gap == Approx(ks_one_sample(xs, cdf).statistic).epsilon(1e-12));
  CHECK(o.svg.find("class=\"sup-gap\"") != std::string::npos);
  CHECK_THROWS_AS(plot::cdf_overlay_svg({}, cdf, "empty"), InsufficientSample);

  auto c = plot::convergence_svg({10, 100, 1000}, {0.3, 0.1, 0.03}, "conv", true);
  CHECK(c.find("log10 x") != std::string::npos);
  CHECK_THROWS_AS(plot::convergence_svg({0, 1}, {1, 2}, "bad", true), DomainError);
  CHECK_THROWS_AS(plot::convergence_svg({1}, {1, 2}, "bad"), ParameterError);
}

TEST_CASE("suite registry") {
  std::vector<std::string> names;
  for (const auto& s : suites()) names.push_back(s.name);
  for (const char* want : {"smoke", "pareto-ratio", "flip-clock", "scaling", "round-trip", "generator", "lemma14",
                           "h-invariance", "measure-identities", "parity", "hitting", "reproducibility"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  ExperimentConfig c;
  c.suite = "nope";
  CHECK_THROWS_AS(run(c), ConfigError);
  c.suite = "smoke";
  c.threads = 0;
  CHECK_THROWS_AS(run(c), ConfigError);
}

TEST_CASE("smoke suite and artifacts") {
  ExperimentConfig c;
  c.suite = "smoke";
  auto dir = std::filesystem::temp_directory_path() / "lk_unit_smoke";
  std::filesystem::remove_all(dir);
  c.out_dir = dir.string();
  auto r = run(c);
  CHECK(r.pass);
  CHECK(r.wall_seconds < 5.0);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "run.log"));
  for (const auto& [name, content] : r.artifacts) CHECK(io::read_file((dir / name).string()) == content);

  c.out_dir.clear();
  auto again = run(c);
  CHECK(again.artifacts == r.artifacts);
  CHECK(again.summary_json() == r.summary_json());
  c.threads = 3;
  CHECK(run(c).artifacts == r.artifacts);
  c.seed += 1;
  CHECK(run(c).artifacts != r.artifacts);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cheap suites pass") {
  for (const char* name : {"lemma14", "measure-identities"}) {
    ExperimentConfig c;
    c.suite = name;
    auto r = run(c);
    CHECK_MESSAGE(r.pass, r.table());
    CHECK(r.table().find("FAIL") == std::string::npos);
  }
  ExperimentConfig c;
  c.suite = "round-trip";
  c.preset = "stable-cond-1.5";
  c.replicas = 3;
  auto r = run(c);
  CHECK(r.pass);
  CHECK(r.checks.size() == 1);
}

TEST_CASE("subcommand helpers") {
  ExperimentConfig c;
  c.replicas = 2;
  c.horizon = 0.5;
  auto files = simulate_artifacts(c);
  CHECK(files.count("log_path_1.json") == 1);
  CHECK(files.count("x_path_0.csv") == 1);
  auto xs = plot::parse_csv(files.at("x_path_0.csv"));
  CHECK(xs.rows.size() == 501);
  CHECK(xs.rows.front()[1] == 1.0);

  c.horizon = 5.0;
  c.dt = 1e-3;
  auto d = decompose_report(c);
  CHECK(d.find("flips") != nullptr);
  CHECK(d.artifacts.count("path_0.csv") == 1);

  ExperimentConfig g;
  g.x0 = 0.7;
  auto rep = generator_report(g);
  CHECK(rep.pass);
  CHECK(rep.checks.size() == 3);
  g.preset = "brownian";
  CHECK_THROWS_AS(generator_report(g), ConfigError);
}
