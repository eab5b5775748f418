#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lk/timechange.hpp"

namespace lk::plot {

/// Written into every SVG; the only content that may differ between versions.
inline constexpr const char* kGenerator = "lkx 0.1.0";

/// Step plot of a path with a marker at every sign change.
std::string path_svg(const SampledPath& path, const std::string& title);

struct CdfOverlay {
  std::string svg;
  /// Largest gap between the empirical and the exact CDF, as annotated.
  double sup_gap = 0.0;
};

/// Empirical CDF of samples against cdf, with the sup gap annotated.
CdfOverlay cdf_overlay_svg(std::vector<double> samples, const std::function<double(double)>& cdf,
                           const std::string& title);

/// Polyline of y against x (e.g. a statistic against n or the step size).
std::string convergence_svg(const std::vector<double>& x, const std::vector<double>& y,
                            const std::string& title, bool log_x = false);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

/// Parses a numeric CSV with a header row; ParseError names the bad line.
Table parse_csv(const std::string& text);

}  // namespace lk::plot
