#include "mkdv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>

#include "mkdv/grid.hpp"

namespace mkdv {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;
constexpr double kMarginL = 72.0, kMarginR = 18.0, kMarginT = 46.0, kMarginB = 52.0;

struct Out {
  std::FILE* f;
  void printf(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    va_list ap;
    va_start(ap, fmt);
    std::vfprintf(f, fmt, ap);
    va_end(ap);
  }
};

std::FILE* open_or_throw(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw MkdvError("svg: cannot open '" + path + "'");
  return f;
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

// Tick positions at a {1,2,5}x10^m step covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 0.5 * step; v += step)
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> t;
  for (int e = static_cast<int>(std::floor(lo)); e <= static_cast<int>(std::ceil(hi)); ++e)
    if (e >= lo - 1e-9 && e <= hi + 1e-9) t.push_back(e);
  if (t.size() < 2) return linear_ticks(lo, hi);
  return t;
}

std::string tick_label(double v, bool log_axis) {
  char buf[40];
  if (log_axis) {
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  double map(double v, double pix_lo, double pix_hi) const {
    const double s = log ? std::log10(v) : v;
    return pix_lo + (s - lo) / (hi - lo) * (pix_hi - pix_lo);
  }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  void expand(double v) {
    if (!usable(v)) return;
    const double s = log ? std::log10(v) : v;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
};

}  // namespace

void write_line_plot(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& opts) {
  Axis ax{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          opts.logx};
  Axis ay{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          opts.logy};
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw MkdvError("svg: series arity mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (ax.usable(s.x[i]) && ay.usable(s.y[i])) {
        ax.expand(s.x[i]);
        ay.expand(s.y[i]);
      }
  }
  if (!(ax.lo <= ax.hi)) {  // nothing plottable
    ax.lo = 0.0;
    ax.hi = 1.0;
    ay.lo = 0.0;
    ay.hi = 1.0;
  }
  if (ax.hi - ax.lo < 1e-12) ax.hi = ax.lo + 1.0;
  if (ay.hi - ay.lo < 1e-12) ay.hi = ay.lo + 1.0;
  const double pad_x = 0.03 * (ax.hi - ax.lo), pad_y = 0.06 * (ay.hi - ay.lo);
  ax.lo -= pad_x;
  ax.hi += pad_x;
  ay.lo -= pad_y;
  ay.hi += pad_y;

  const double W = opts.width, H = opts.height;
  const double px0 = kMarginL, px1 = W - kMarginR;
  const double py0 = H - kMarginB, py1 = kMarginT;  // y grows upward

  Out o{open_or_throw(path)};
  o.printf("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
           "viewBox=\"0 0 %g %g\">\n",
           W, H, W, H);
  o.printf("<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n", W, H);
  o.printf("<text x=\"%g\" y=\"20\" font-family=\"sans-serif\" font-size=\"15\" "
           "font-weight=\"bold\">%s</text>\n",
           px0, escape(opts.title).c_str());
  double anno_y = 36.0;
  for (const auto& a : opts.annotations) {
    o.printf("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
             "fill=\"#444444\">%s</text>\n",
             px0 + 4.0, anno_y, escape(a).c_str());
    anno_y += 15.0;
  }

  // frame + ticks + grid
  o.printf("<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
           "stroke=\"#222222\"/>\n",
           px0, py1, px1 - px0, py0 - py1);
  const auto xticks = ax.log ? log_ticks(ax.lo, ax.hi) : linear_ticks(ax.lo, ax.hi);
  const auto yticks = ay.log ? log_ticks(ay.lo, ay.hi) : linear_ticks(ay.lo, ay.hi);
  for (double tv : xticks) {
    const double px = px0 + (tv - ax.lo) / (ax.hi - ax.lo) * (px1 - px0);
    o.printf("<line x1=\"%.2f\" y1=\"%g\" x2=\"%.2f\" y2=\"%g\" stroke=\"#dddddd\"/>\n", px,
             py1, px, py0);
    o.printf("<text x=\"%.2f\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
             "text-anchor=\"middle\">%s</text>\n",
             px, py0 + 16.0, tick_label(tv, ax.log).c_str());
  }
  for (double tv : yticks) {
    const double py = py0 + (tv - ay.lo) / (ay.hi - ay.lo) * (py1 - py0);
    o.printf("<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"#dddddd\"/>\n", px0,
             py, px1, py);
    o.printf("<text x=\"%g\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" "
             "text-anchor=\"end\">%s</text>\n",
             px0 - 6.0, py + 4.0, tick_label(tv, ay.log).c_str());
  }
  o.printf("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">%s</text>\n",
           0.5 * (px0 + px1), H - 12.0, escape(opts.xlabel).c_str());
  o.printf("<text x=\"16\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 16 %g)\">%s</text>\n",
           0.5 * (py0 + py1), 0.5 * (py0 + py1), escape(opts.ylabel).c_str());

  // data
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    std::string pts;
    bool open = false;
    auto flush = [&]() {
      if (open && !pts.empty())
        o.printf("<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" "
                 "stroke-width=\"1.5\"/>\n",
                 pts.c_str(), color);
      pts.clear();
      open = false;
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) {
        flush();
        continue;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", ax.map(s.x[i], px0, px1),
                    ay.map(s.y[i], py0, py1));
      pts += buf;
      open = true;
    }
    flush();
    if (!s.label.empty()) {
      const double ly = py1 + 16.0 + 16.0 * static_cast<double>(si);
      o.printf("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" "
               "stroke-width=\"2\"/>\n",
               px1 - 150.0, ly - 4.0, px1 - 126.0, ly - 4.0, color);
      o.printf("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" "
               "font-size=\"11\">%s</text>\n",
               px1 - 120.0, ly, escape(s.label).c_str());
    }
  }
  o.printf("</svg>\n");
  std::fclose(o.f);
}

void write_heat_strip(const std::string& path, const std::vector<std::string>& row_labels,
                      const std::vector<double>& col_coords,
                      const std::vector<std::vector<double>>& row_values, double vmax,
                      const SvgOptions& opts) {
  if (row_labels.size() != row_values.size())
    throw MkdvError("svg: heat strip arity mismatch");
  if (!(vmax > 0.0)) throw MkdvError("svg: heat strip needs vmax > 0");
  const std::size_t rows = row_values.size(), cols = col_coords.size();
  for (const auto& r : row_values)
    if (r.size() != cols) throw MkdvError("svg: heat strip row length mismatch");

  const double W = opts.width;
  const double strip_h = 26.0, gap = 6.0;
  const double H = kMarginT + 30.0 + static_cast<double>(rows) * (strip_h + gap) + 40.0;
  const double px0 = kMarginL, px1 = W - kMarginR;

  Out o{open_or_throw(path)};
  o.printf("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
           "viewBox=\"0 0 %g %g\">\n",
           W, H, W, H);
  o.printf("<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n", W, H);
  o.printf("<text x=\"%g\" y=\"20\" font-family=\"sans-serif\" font-size=\"15\" "
           "font-weight=\"bold\">%s</text>\n",
           px0, escape(opts.title).c_str());
  o.printf("<text x=\"%g\" y=\"38\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"#444444\">scale: 0 (dark) to %.6g (bright)</text>\n",
           px0, vmax);

  for (std::size_t r = 0; r < rows; ++r) {
    const double y = kMarginT + 30.0 + static_cast<double>(r) * (strip_h + gap);
    o.printf("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
             "text-anchor=\"end\">%s</text>\n",
             px0 - 6.0, y + 0.65 * strip_h, escape(row_labels[r]).c_str());
    for (std::size_t cidx = 0; cidx < cols; ++cidx) {
      const double f =
          std::clamp(std::isfinite(row_values[r][cidx]) ? row_values[r][cidx] / vmax : 1.0,
                     0.0, 1.0);
      // two-segment ramp: dark blue -> orange -> light yellow
      int rr, gg, bb;
      if (f < 0.5) {
        const double s = f / 0.5;
        rr = static_cast<int>(20 + s * (230 - 20));
        gg = static_cast<int>(40 + s * (120 - 40));
        bb = static_cast<int>(90 + s * (30 - 90));
      } else {
        const double s = (f - 0.5) / 0.5;
        rr = static_cast<int>(230 + s * (255 - 230));
        gg = static_cast<int>(120 + s * (235 - 120));
        bb = static_cast<int>(30 + s * (130 - 30));
      }
      const double x = px0 + static_cast<double>(cidx) / static_cast<double>(cols) * (px1 - px0);
      const double w = (px1 - px0) / static_cast<double>(cols) + 0.5;
      o.printf("<rect x=\"%.2f\" y=\"%g\" width=\"%.2f\" height=\"%g\" "
               "fill=\"rgb(%d,%d,%d)\"/>\n",
               x, y, w, strip_h, rr, gg, bb);
    }
  }
  if (cols > 0) {
    o.printf("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%.6g</text>\n",
             px0, H - 14.0, col_coords.front());
    o.printf("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
             "text-anchor=\"end\">%.6g</text>\n",
             px1, H - 14.0, col_coords.back());
    o.printf("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
             "text-anchor=\"middle\">%s</text>\n",
             0.5 * (px0 + px1), H - 14.0, escape(opts.xlabel).c_str());
  }
  o.printf("</svg>\n");
  std::fclose(o.f);
}

}  // namespace mkdv
