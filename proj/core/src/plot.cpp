#include "lk/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lk/errors.hpp"
#include "lk/io.hpp"

namespace lk::plot {

namespace {

constexpr double kW = 640.0;
constexpr double kH = 400.0;
constexpr double kMargin = 50.0;

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kW - 2 * kMargin); }
  double py(double y) const { return kH - kMargin - (y - y0) / (y1 - y0) * (kH - 2 * kMargin); }
};

Frame frame_of(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw ParameterError("nothing to plot");
  auto [xa, xb] = std::minmax_element(x.begin(), x.end());
  auto [ya, yb] = std::minmax_element(y.begin(), y.end());
  Frame f{*xa, *xb, *ya, *yb};
  if (f.x1 <= f.x0) f.x1 = f.x0 + 1.0;
  if (f.y1 <= f.y0) {
    f.y0 -= 0.5;
    f.y1 += 0.5;
  }
  double pad = 0.05 * (f.y1 - f.y0);
  f.y0 -= pad;
  f.y1 += pad;
  return f;
}

std::string num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return ec == std::errc() ? std::string(buf, p) : "0";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title, const Frame& f) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<!-- generator: " << kGenerator << " -->\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << escape(title) << "</text>\n"
    << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kW - 2 * kMargin << "\" height=\""
    << kH - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& s, const char* anchor) {
    o << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << s << "</text>\n";
  };
  label(kMargin, kH - kMargin + 14, io::fmt(f.x0), "start");
  label(kW - kMargin, kH - kMargin + 14, io::fmt(f.x1), "end");
  label(kMargin - 4, kH - kMargin, io::fmt(f.y0), "end");
  label(kMargin - 4, kMargin + 8, io::fmt(f.y1), "end");
  return o.str();
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* colour) {
  std::ostringstream o;
  o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) o << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
  o << "\"/>\n";
  return o.str();
}

}  // namespace

std::string path_svg(const SampledPath& path, const std::string& title) {
  Frame f = frame_of(path.times, path.values);
  std::string out = header(title, f);
  if (f.y0 < 0.0 && f.y1 > 0.0) {
    out += "<line x1=\"" + num(f.px(f.x0)) + "\" y1=\"" + num(f.py(0.0)) + "\" x2=\"" + num(f.px(f.x1)) +
           "\" y2=\"" + num(f.py(0.0)) + "\" stroke=\"grey\" stroke-dasharray=\"4,4\"/>\n";
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < path.size(); ++i) {
    pts.emplace_back(f.px(path.times[i]), f.py(path.values[i]));
    if (i + 1 < path.size()) pts.emplace_back(f.px(path.times[i + 1]), f.py(path.values[i]));
  }
  out += polyline(pts, "steelblue");
  for (std::size_t i : path.flip_indices) {
    out += "<circle class=\"flip\" cx=\"" + num(f.px(path.times[i + 1])) + "\" cy=\"" +
           num(f.py(path.values[i + 1])) + "\" r=\"3\" fill=\"crimson\"/>\n";
  }
  out += "<text x=\"" + num(kW - kMargin) + "\" y=\"" + num(kMargin - 6) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">sign changes: " +
         std::to_string(path.flip_indices.size()) + "</text>\n</svg>\n";
  return out;
}

CdfOverlay cdf_overlay_svg(std::vector<double> samples, const std::function<double(double)>& cdf,
                           const std::string& title) {
  if (samples.empty()) throw InsufficientSample("no samples to plot");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  CdfOverlay res;
  double gap_at = samples.front();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double F = cdf(samples[i]);
    double d = std::max(std::abs((i + 1) / n - F), std::abs(F - i / n));
    if (d > res.sup_gap) {
      res.sup_gap = d;
      gap_at = samples[i];
    }
  }
  // Clip the view at the 99th percentile so heavy tails stay readable.
  double hi = samples[static_cast<std::size_t>(0.99 * (n - 1))];
  double lo = samples.front();
  Frame f{lo, hi > lo ? hi : lo + 1.0, -0.05, 1.05};
  std::string out = header(title, f);
  std::vector<std::pair<double, double>> emp, exact;
  for (std::size_t i = 0; i < samples.size() && samples[i] <= f.x1; ++i) {
    emp.emplace_back(f.px(samples[i]), f.py(i / n));
    emp.emplace_back(f.px(samples[i]), f.py((i + 1) / n));
  }
  for (int k = 0; k <= 200; ++k) {
    double x = f.x0 + (f.x1 - f.x0) * k / 200.0;
    exact.emplace_back(f.px(x), f.py(cdf(x)));
  }
  out += polyline(emp, "steelblue");
  out += polyline(exact, "crimson");
  out += "<line x1=\"" + num(f.px(std::min(gap_at, f.x1))) + "\" y1=\"" + num(f.py(0.0)) + "\" x2=\"" +
         num(f.px(std::min(gap_at, f.x1))) + "\" y2=\"" + num(f.py(1.0)) +
         "\" stroke=\"grey\" stroke-dasharray=\"2,3\"/>\n";
  out += "<text class=\"sup-gap\" x=\"" + num(kW - kMargin - 6) + "\" y=\"" + num(kH - kMargin - 10) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">D = " + io::fmt(res.sup_gap) +
         ", n = " + std::to_string(samples.size()) + "</text>\n</svg>\n";
  res.svg = std::move(out);
  return res;
}

std::string convergence_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& title,
                            bool log_x) {
  if (x.size() != y.size()) throw ParameterError("x and y differ in length");
  std::vector<double> xs = x;
  if (log_x) {
    for (double& v : xs) {
      if (!(v > 0.0)) throw DomainError("log axis needs positive x");
      v = std::log10(v);
    }
  }
  Frame f = frame_of(xs, y);
  std::string out = header(title + (log_x ? " (log10 x)" : ""), f);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(f.px(xs[i]), f.py(y[i]));
  out += polyline(pts, "steelblue");
  for (const auto& p : pts)
    out += "<circle cx=\"" + num(p.first) + "\" cy=\"" + num(p.second) + "\" r=\"2.5\" fill=\"steelblue\"/>\n";
  out += "</svg>\n";
  return out;
}

std::vector<double> Table::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("no column '" + name + "'");
  std::size_t j = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                       " fields, found " + std::to_string(cells.size()));
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || p != c.data() + c.size())
        throw ParseError("line " + std::to_string(lineno) + ": not a number: '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ParseError("empty CSV");
  return t;
}

}  // namespace lk::plot
