#pragma once

#include <string>
#include <vector>

namespace mkdv {

struct SvgSeries {
  std::vector<double> x, y;
  std::string label;
};

struct SvgOptions {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<std::string> annotations;  // free text, drawn under the title
  int width = 760, height = 480;
};

// Static line plot; series are drawn in a fixed palette, NaN/inf samples and
// non-positive values on log axes break the polyline. Output is deterministic
// byte-for-byte for identical inputs.
void write_line_plot(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& opts);

// Heat strip: one row per entry of row_values (labelled by row_labels), cells
// along col_coords, colour ramped linearly from 0 to vmax (values clamp).
void write_heat_strip(const std::string& path, const std::vector<std::string>& row_labels,
                      const std::vector<double>& col_coords,
                      const std::vector<std::vector<double>>& row_values, double vmax,
                      const SvgOptions& opts);

}  // namespace mkdv
