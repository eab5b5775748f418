#include "lk/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lk/errors.hpp"

namespace lk::io {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      cfg.data_[section];
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    cfg.data_[section][key] = trim(s.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  return it != data_.end() && it->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ConfigError("missing key '" + key + "' in section [" + section + "]");
  return data_.at(section).at(key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? data_.at(section).at(key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  std::string v = get(section, key);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "' in section [" + section + "] is not a number: " + v);
  return out;
}

double Config::get_double_or(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

StableModel model_from_config(const Config& cfg, const std::string& section) {
  if (cfg.has(section, "preset")) return StableModel::preset(cfg.get(section, "preset"));
  std::string flavor = cfg.get_or(section, "flavor", "killed");
  StableModel m;
  if (flavor == "killed") {
    m.flavor = Flavor::KilledAtZero;
  } else if (flavor == "conditioned") {
    m.flavor = Flavor::ConditionedAvoidZero;
  } else if (flavor == "brownian") {
    m.flavor = Flavor::Brownian;
  } else {
    throw ConfigError("unknown flavor '" + flavor + "'");
  }
  double alpha = cfg.get_double(section, "alpha");
  if (cfg.has(section, "c_plus") || cfg.has(section, "c_minus")) {
    m.params = StableParams::make(alpha, cfg.get_double(section, "c_plus"), cfg.get_double(section, "c_minus"));
  } else {
    m.params = StableParams::symmetric_normalized(alpha);
  }
  m.validate();
  return m;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ParameterError("CSV row width differs from the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string density_csv(const MeasureSpec& m, const std::vector<double>& ys) {
  std::vector<std::vector<double>> rows;
  for (double y : ys) rows.push_back({y, levy_density(m, y)});
  return csv({"y", "density"}, rows);
}

std::string segment_csv(const SegmentPath& seg) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < seg.times.size(); ++i) rows.push_back({seg.times[i], seg.values[i]});
  return csv({"t", "xi"}, rows);
}

std::string sampled_path_csv(const SampledPath& path, const std::string& value_name) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < path.size(); ++i) rows.push_back({path.times[i], path.values[i]});
  return csv({"t", value_name}, rows);
}

std::string decomposition_csv(const FlipDecomposition& d) {
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n < d.flips(); ++n)
    rows.push_back({static_cast<double>(n + 1), d.flip_times[n], d.ratios[n], d.clocks[n]});
  return csv({"n", "H", "J", "clock"}, rows);
}

std::string log_path_json(const LogPath& path) {
  nlohmann::ordered_json j;
  j["start_sign"] = path.start_sign;
  j["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : path.segments) {
    nlohmann::ordered_json seg;
    seg["t"] = s.times;
    seg["xi"] = s.values;
    seg["lifetime"] = std::isfinite(s.lifetime) ? nlohmann::ordered_json(s.lifetime) : nlohmann::ordered_json();
    seg["terminal"] = s.terminal_value;
    seg["U"] = s.flip_jump;
    seg["censored"] = s.censored;
    j["segments"].push_back(seg);
  }
  return j.dump() + "\n";
}

std::string ks_json(const std::string& label, const KSResult& r) {
  nlohmann::ordered_json j;
  j["check"] = label;
  j["D"] = r.statistic;
  j["n"] = r.n;
  j["p"] = r.p_value;
  j["level"] = r.level;
  j["pass"] = r.pass;
  return j.dump();
}

std::string report_json(const GeneratorReport& r) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["method"] = r.method;
  j["x"] = r.x;
  j["formula"] = r.formula;
  j["oracle"] = r.oracle;
  j["oracle_se"] = r.oracle_se;
  j["abs_err"] = r.abs_err;
  j["rel_err"] = r.rel_err;
  return j.dump();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lk::io
