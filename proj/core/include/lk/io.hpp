#pragma once

#include <map>
#include <string>
#include <vector>

#include "lk/generators.hpp"
#include "lk/stable_models.hpp"
#include "lk/verify.hpp"

namespace lk::io {

/// Sectioned key = value text. Keys before the first [section] header land
/// in the section "". Lines starting with # or ; are comments.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  const std::map<std::string, std::map<std::string, std::string>>& sections() const { return data_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

/// [model] section: either preset = <name> or flavor, alpha, c_plus, c_minus.
StableModel model_from_config(const Config& cfg, const std::string& section = "model");

/// Shortest round-trip decimal representation; identical across runs.
std::string fmt(double v);

/// CSV with a header row; every row must have the header's width.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

std::string density_csv(const MeasureSpec& m, const std::vector<double>& ys);
std::string segment_csv(const SegmentPath& seg);
std::string sampled_path_csv(const SampledPath& path, const std::string& value_name = "y");
std::string decomposition_csv(const FlipDecomposition& d);
std::string log_path_json(const LogPath& path);

std::string ks_json(const std::string& label, const KSResult& r);
std::string report_json(const GeneratorReport& r);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace lk::io
