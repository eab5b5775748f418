#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lk/io.hpp"
#include "lk/stable_models.hpp"

namespace lk {

/// Settings of one experiment run. Unset optionals fall back to the
/// defaults of the selected suite.
struct ExperimentConfig {
  std::string suite = "smoke";
  std::string preset;
  /// Without a preset, selects the symmetric killed stable model of this index.
  std::optional<double> alpha;
  /// An explicit model; takes precedence over preset and alpha.
  std::optional<StableModel> model;
  double x0 = 1.0;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::size_t> replicas;
  std::uint64_t seed = 20240601;
  /// Directory receiving the artifacts; empty keeps them in memory only.
  std::string out_dir;
  unsigned threads = 1;

  void validate() const;
  /// The model chosen by model/preset/alpha, or fallback when none is set.
  StableModel model_or(const std::string& fallback) const;
};

/// [experiment] section: suite, preset, alpha, x0, dt, horizon, replicas,
/// seed, out, threads. A [model] section overrides preset and alpha.
ExperimentConfig experiment_from_config(const io::Config& cfg);

struct CheckEntry {
  std::string name;
  bool pass = true;
  /// Diagnostics are reported but do not enter the overall verdict.
  bool required = true;
  /// One-line JSON object with the check's numbers.
  std::string json;
};

struct ExperimentReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckEntry> checks;
  bool pass = true;
  double wall_seconds = 0.0;
  /// File name to content; CSV and JSON artifacts are byte-identical for a
  /// fixed config.
  std::map<std::string, std::string> artifacts;

  const CheckEntry* find(const std::string& name) const;
  /// Deterministic JSON summary (no timing).
  std::string summary_json() const;
  /// One line per check: PASS/FAIL/INFO name json.
  std::string table() const;
};

struct SuiteInfo {
  std::string name;
  std::string description;
};

const std::vector<SuiteInfo>& suites();

/// Runs config.suite and, when out_dir is set, writes the artifacts plus
/// report.json and run.log there.
ExperimentReport run(const ExperimentConfig& config);

void write_artifacts(const ExperimentReport& report, const std::string& dir);

/// Paths and their time changes for the simulate subcommand.
std::map<std::string, std::string> simulate_artifacts(const ExperimentConfig& config);

/// Sign-change decomposition of direct stable paths for the decompose subcommand.
ExperimentReport decompose_report(const ExperimentConfig& config);

/// Closed-form generators of the battery at config.x0, plus a direct Monte
/// Carlo estimate when replicas is set.
ExperimentReport generator_report(const ExperimentConfig& config);

/// Runs fn(i) for i in [0, n) on up to threads workers. Each index writes
/// its own slot, so results do not depend on the thread count.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace lk
