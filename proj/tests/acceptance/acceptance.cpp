// One PASS/FAIL line per acceptance criterion. Optional arguments: an output
// directory for the suite artifacts (--out DIR) and criterion numbers to run.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lk/experiment.hpp"

namespace {

struct Criterion {
  int id;
  const char* title;
  const char* suite;
  // Required checks that decide this criterion; empty means every required check of the suite.
  std::vector<std::string> checks;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "Pareto ratio law", "pareto-ratio", {"ratios-negative-and-complete", "pareto-ratio"}},
      {2, "flip-clock law", "pareto-ratio", {"flip-clock"}},
      {3, "scaling property", "scaling", {}},
      {4, "round trip", "round-trip", {}},
      {5, "generator agreement", "generator", {}},
      {6, "truncation-change identity", "lemma14", {}},
      {7, "h-invariance", "h-invariance", {}},
      {8, "measure identities", "measure-identities", {}},
      {9, "parity decomposition", "parity", {}},
      {10, "flip levels and hitting time", "hitting", {}},
      {11, "reproducibility", "reproducibility", {}},
  };
  return list;
}

std::string detail(const lk::CheckEntry& c) {
  auto j = nlohmann::json::parse(c.json);
  char buf[160];
  if (j.contains("D") && j.contains("p")) {
    std::snprintf(buf, sizeof buf, "%s D=%.4f p=%.3g n=%d", c.name.c_str(), j["D"].get<double>(),
                  j["p"].get<double>(), j["n"].get<int>());
    return buf;
  }
  if (j.contains("z")) {
    std::snprintf(buf, sizeof buf, "%s z=%.2f", c.name.c_str(), j["z"].get<double>());
    return buf;
  }
  return c.name;
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      only.insert(std::atoi(a.c_str()));
    }
  }

  std::map<std::string, lk::ExperimentReport> reports;
  int failed = 0;
  for (const auto& cr : criteria()) {
    if (!only.empty() && !only.count(cr.id)) continue;
    std::string line;
    bool pass = true;
    try {
      if (!reports.count(cr.suite)) {
        lk::ExperimentConfig cfg;
        cfg.suite = cr.suite;
        if (!out_dir.empty()) cfg.out_dir = out_dir + "/" + cr.suite;
        reports.emplace(cr.suite, lk::run(cfg));
      }
      const auto& r = reports.at(cr.suite);
      std::size_t total = 0, ok = 0;
      std::string worst;
      for (const auto& c : r.checks) {
        if (!c.required) continue;
        if (!cr.checks.empty() && std::find(cr.checks.begin(), cr.checks.end(), c.name) == cr.checks.end()) continue;
        ++total;
        if (c.pass) {
          ++ok;
        } else if (worst.empty()) {
          worst = detail(c);
        }
      }
      pass = total > 0 && ok == total;
      char buf[64];
      std::snprintf(buf, sizeof buf, " [%zu/%zu checks, %.1fs]", ok, total, r.wall_seconds);
      line = buf;
      if (!worst.empty()) {
        line += " first failure: " + worst;
      } else if (cr.checks.size() == 1) {
        for (const auto& c : r.checks)
          if (c.name == cr.checks.front()) line += " " + detail(c);
      }
    } catch (const std::exception& e) {
      pass = false;
      line = std::string(" error: ") + e.what();
    }
    failed += !pass;
    std::printf("%s criterion %2d %s (suite %s)%s\n", pass ? "PASS" : "FAIL", cr.id, cr.title, cr.suite,
                line.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
