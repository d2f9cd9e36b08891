#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "json.hpp"
#include "scholarscope/viz.hpp"

namespace scholarscope::viz {
namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0.0;
  return fmt::format("{:.2f}", v);
}

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        // Control characters are not allowed in XML 1.0.
        if (static_cast<unsigned char>(c) >= 0x20 || c == '\t' || c == '\n') out += c;
    }
  }
  return out;
}

std::string tick_text(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  return fmt::format("{:g}", v);
}

class Svg {
 public:
  Svg(int w, int h) {
    out_ = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"Helvetica, Arial, sans-serif\">\n",
        w, h);
  }
  void raw(std::string_view s) { out_ += s; }
  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none",
            std::string_view title = {}) {
    out_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"{}\"", num(x), num(y),
                        num(std::max(w, 0.0)), num(std::max(h, 0.0)), fill, stroke);
    close_with_title(title);
  }
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            std::string_view extra = {}) {
    out_ += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
                        num(x1), num(y1), num(x2), num(y2), stroke, num(width), extra);
  }
  void circle(double cx, double cy, double r, std::string_view fill, std::string_view stroke = "none",
              std::string_view title = {}) {
    out_ += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"{}\"", num(cx), num(cy), num(r),
                        fill, stroke);
    close_with_title(title);
  }
  void path(std::string_view d, std::string_view fill, std::string_view stroke = "none", std::string_view extra = {},
            std::string_view title = {}) {
    out_ += fmt::format("<path d=\"{}\" fill=\"{}\" stroke=\"{}\"{}", d, fill, stroke, extra);
    close_with_title(title);
  }
  void text(double x, double y, std::string_view s, int size, std::string_view anchor = "middle", double rotate = 0.0,
            std::string_view fill = "#222222") {
    out_ += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{}\" fill=\"{}\"", num(x), num(y), size,
                        anchor, fill);
    if (rotate != 0.0) out_ += fmt::format(" transform=\"rotate({} {} {})\"", num(rotate), num(x), num(y));
    out_ += fmt::format(">{}</text>\n", esc(s));
  }
  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  void close_with_title(std::string_view title) {
    if (title.empty()) {
      out_ += "/>\n";
    } else {
      out_ += fmt::format("><title>{}</title></{}>\n", esc(title), element_name());
    }
  }
  std::string_view element_name() const {
    auto start = out_.rfind('<');
    auto end = out_.find(' ', start);
    return std::string_view(out_).substr(start + 1, end - start - 1);
  }
  std::string out_;
};

struct Box {
  double left, top, right, bottom;
  double width() const { return right - left; }
  double height() const { return bottom - top; }
};

// Maps data values onto a pixel range.
struct Axis {
  double d0 = 0, d1 = 1, r0 = 0, r1 = 1;
  bool log = false;

  double operator()(double v) const {
    if (log) {
      const double a = std::log10(d0), b = std::log10(d1);
      return r0 + (std::log10(std::max(v, d0)) - a) / (b - a) * (r1 - r0);
    }
    return r0 + (v - d0) / (d1 - d0) * (r1 - r0);
  }
  double base() const { return log ? d0 : std::clamp(0.0, d0, d1); }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double p = d0; p <= d1 * 1.0000001; p *= 10) t.push_back(p);
      return t;
    }
    const double raw = (d1 - d0) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      step = m * mag;
      if (step >= raw) break;
    }
    for (double v = std::ceil(d0 / step - 1e-9) * step; v <= d1 + step * 1e-9; v += step) t.push_back(v);
    return t;
  }
};

Axis make_axis(double lo, double hi, bool log, bool include_zero, double r0, double r1) {
  Axis a;
  a.log = log;
  a.r0 = r0;
  a.r1 = r1;
  if (log) {
    lo = std::max(lo, 1e-12);
    hi = std::max(hi, lo);
    a.d0 = std::pow(10.0, std::floor(std::log10(lo)));
    a.d1 = std::pow(10.0, std::ceil(std::log10(hi)));
    if (a.d1 <= a.d0) a.d1 = a.d0 * 10.0;
    return a;
  }
  if (include_zero) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
  }
  if (hi == lo) {
    hi += 1.0;
    if (!include_zero) lo -= 1.0;
  }
  const double pad = (hi - lo) * 0.05;
  a.d0 = (include_zero && lo == 0.0) ? 0.0 : lo - pad;
  a.d1 = hi + pad;
  return a;
}

struct Ctx {
  const ChartSpec& spec;
  const ChartOptions& o;
  const AnalysisResult& d;
  Svg& svg;
  Box plot;
};

std::string series_color(const ChartOptions& o, size_t i) {
  return i == 0 ? o.colors.bar : kPalette[i % std::size(kPalette)];
}

void legend(Ctx& c, const std::vector<std::pair<std::string, std::string>>& items) {
  if (!c.o.legend_visible || items.empty()) return;
  const double x = c.plot.right + 24;
  double y = c.plot.top + 10;
  for (const auto& [label, color] : items) {
    c.svg.rect(x, y - 10, 14, 14, color, c.o.colors.border);
    c.svg.text(x + 20, y + 2, label, c.o.ticks.fontsize, "start");
    y += c.o.ticks.fontsize + 10;
    if (y > c.plot.bottom) break;
  }
}

void axis_titles(Ctx& c) {
  const auto& l = c.o.labels;
  if (!l.x_label.empty()) c.svg.text((c.plot.left + c.plot.right) / 2, c.o.height - 20.0, l.x_label, l.fontsize);
  if (!l.y_label.empty()) c.svg.text(24, (c.plot.top + c.plot.bottom) / 2, l.y_label, l.fontsize, "middle", -90);
}

void frame_lines(Ctx& c) {
  c.svg.line(c.plot.left, c.plot.bottom, c.plot.right, c.plot.bottom, "#333333");
  c.svg.line(c.plot.left, c.plot.top, c.plot.left, c.plot.bottom, "#333333");
}

// Numeric axis along x (horizontal) or y.
void value_axis(Ctx& c, const Axis& a, bool along_x) {
  for (double t : a.ticks()) {
    const double p = a(t);
    if (along_x) {
      if (c.o.grid_visible) c.svg.line(p, c.plot.top, p, c.plot.bottom, "#dddddd");
      c.svg.line(p, c.plot.bottom, p, c.plot.bottom + 5, "#333333");
      c.svg.text(p, c.plot.bottom + 8 + c.o.ticks.fontsize, tick_text(t), c.o.ticks.fontsize);
    } else {
      if (c.o.grid_visible) c.svg.line(c.plot.left, p, c.plot.right, p, "#dddddd");
      c.svg.line(c.plot.left - 5, p, c.plot.left, p, "#333333");
      c.svg.text(c.plot.left - 8, p + c.o.ticks.fontsize / 3.0, tick_text(t), c.o.ticks.fontsize, "end");
    }
  }
}

// Category axis; returns band centers.
std::vector<double> category_axis(Ctx& c, const std::vector<std::string>& labels, bool along_x, double& band) {
  std::vector<double> centers;
  const double span = along_x ? c.plot.width() : c.plot.height();
  band = span / static_cast<double>(std::max<size_t>(labels.size(), 1));
  const int rot = c.o.ticks.rotation_degrees;
  for (size_t i = 0; i < labels.size(); ++i) {
    const double p = (along_x ? c.plot.left : c.plot.top) + band * (static_cast<double>(i) + 0.5);
    centers.push_back(p);
    if (along_x) {
      const double y = c.plot.bottom + 8 + c.o.ticks.fontsize;
      c.svg.text(p, y, labels[i], c.o.ticks.fontsize, rot == 0 ? "middle" : (rot < 0 ? "end" : "start"), rot);
    } else {
      c.svg.text(c.plot.left - 8, p + c.o.ticks.fontsize / 3.0, labels[i], c.o.ticks.fontsize, "end", rot);
    }
  }
  return centers;
}

std::vector<std::string> row_labels(const AnalysisResult& d) {
  std::vector<std::string> out;
  for (const auto& r : d.rows) out.push_back(r.label);
  return out;
}

double row_total(const ResultRow& r) { return std::accumulate(r.values.begin(), r.values.end(), 0.0); }

// Single value per row: first column, or the sum of observations.
double row_value(const AnalysisResult& d, const ResultRow& r) {
  if (d.shape == ResultShape::kDistribution) return row_total(r);
  return r.values.empty() ? 0.0 : r.values.front();
}

void render_bars(Ctx& c, bool stacked) {
  const bool horiz = c.o.orientation == Orientation::kHorizontal;
  const bool log = (horiz ? c.o.x_scale : c.o.y_scale) == Scale::kLog;
  const bool dist = c.d.shape == ResultShape::kDistribution;
  const size_t series = dist ? 1 : c.d.columns.size();
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& r : c.d.rows) {
    if (stacked && !dist) {
      double s = 0.0;
      for (double v : r.values) s += std::max(v, 0.0);
      lo = first ? s : std::min(lo, s);
      hi = first ? s : std::max(hi, s);
      first = false;
      continue;
    }
    for (size_t i = 0; i < series; ++i) {
      const double v = dist ? row_total(r) : r.values[i];
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  const Axis a = horiz ? make_axis(lo, hi, log, true, c.plot.left, c.plot.right)
                       : make_axis(lo, hi, log, true, c.plot.bottom, c.plot.top);
  value_axis(c, a, horiz);
  double band = 0;
  const auto centers = category_axis(c, row_labels(c.d), !horiz, band);
  frame_lines(c);
  const double inner = band * 0.8;
  for (size_t ri = 0; ri < c.d.rows.size(); ++ri) {
    const auto& r = c.d.rows[ri];
    double acc = a.base();
    for (size_t i = 0; i < series; ++i) {
      const double v = dist ? row_total(r) : r.values[i];
      double from, to, off, thick;
      if (stacked) {
        from = acc;
        to = acc + std::max(v, 0.0);
        acc = to;
        off = -inner / 2;
        thick = inner;
      } else {
        from = a.base();
        to = v;
        thick = inner / static_cast<double>(series);
        off = -inner / 2 + thick * static_cast<double>(i);
      }
      const double p0 = a(from), p1 = a(to);
      const auto title = fmt::format("{}: {}", r.label, tick_text(v));
      const auto color = series_color(c.o, i);
      if (horiz) {
        c.svg.rect(std::min(p0, p1), centers[ri] + off, std::abs(p1 - p0), thick, color, c.o.colors.border, title);
      } else {
        c.svg.rect(centers[ri] + off, std::min(p0, p1), thick, std::abs(p1 - p0), color, c.o.colors.border, title);
      }
    }
  }
  if (series > 1) {
    std::vector<std::pair<std::string, std::string>> items;
    for (size_t i = 0; i < series; ++i) items.push_back({c.d.columns[i], series_color(c.o, i)});
    legend(c, items);
  }
}

void render_line(Ctx& c) {
  const bool log = c.o.y_scale == Scale::kLog;
  const bool dist = c.d.shape == ResultShape::kDistribution;
  const size_t series = dist ? 1 : c.d.columns.size();
  double lo = 0, hi = 0;
  bool first = true;
  for (const auto& r : c.d.rows) {
    for (size_t i = 0; i < series; ++i) {
      const double v = dist ? row_total(r) : r.values[i];
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  const Axis a = make_axis(lo, hi, log, !log, c.plot.bottom, c.plot.top);
  value_axis(c, a, false);
  double band = 0;
  const auto xs = category_axis(c, row_labels(c.d), true, band);
  frame_lines(c);
  std::vector<std::pair<std::string, std::string>> items;
  for (size_t i = 0; i < series; ++i) {
    const std::string color = i == 0 ? c.o.colors.line : kPalette[i % std::size(kPalette)];
    std::string d;
    for (size_t ri = 0; ri < c.d.rows.size(); ++ri) {
      const double v = dist ? row_total(c.d.rows[ri]) : c.d.rows[ri].values[i];
      d += fmt::format("{}{} {} ", ri == 0 ? 'M' : 'L', num(xs[ri]), num(a(v)));
    }
    if (!d.empty()) d.pop_back();
    c.svg.path(d, "none", color, " stroke-width=\"2\"");
    for (size_t ri = 0; ri < c.d.rows.size(); ++ri) {
      const double v = dist ? row_total(c.d.rows[ri]) : c.d.rows[ri].values[i];
      c.svg.circle(xs[ri], a(v), 4, c.o.colors.marker, color, fmt::format("{}: {}", c.d.rows[ri].label, tick_text(v)));
    }
    items.push_back({dist ? std::string("total") : c.d.columns[i], color});
  }
  if (series > 1) legend(c, items);
}

struct Group {
  std::string label;
  std::vector<double> values;  // sorted
};

// Distribution rows are groups; otherwise each column is a group over rows
// (a single column gives one group).
std::vector<Group> groups_of(const AnalysisResult& d) {
  std::vector<Group> out;
  if (d.shape == ResultShape::kDistribution) {
    for (const auto& r : d.rows) out.push_back({r.label, r.values});
  } else {
    for (size_t i = 0; i < d.columns.size(); ++i) {
      Group g{d.columns[i], {}};
      for (const auto& r : d.rows) g.values.push_back(r.values[i]);
      out.push_back(std::move(g));
    }
  }
  for (auto& g : out) std::sort(g.values.begin(), g.values.end());
  return out;
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

// Draws the shared frame for box/violin/swarm and returns the value axis.
Axis group_frame(Ctx& c, const std::vector<Group>& groups, std::vector<double>& centers, double& band, double pad = 0.0) {
  const bool horiz = c.o.orientation == Orientation::kHorizontal;
  const bool log = (horiz ? c.o.x_scale : c.o.y_scale) == Scale::kLog;
  double lo = 0, hi = 0;
  bool first = true;
  for (const auto& g : groups) {
    if (g.values.empty()) continue;
    lo = first ? g.values.front() - pad : std::min(lo, g.values.front() - pad);
    hi = first ? g.values.back() + pad : std::max(hi, g.values.back() + pad);
    first = false;
  }
  const Axis a = horiz ? make_axis(lo, hi, log, false, c.plot.left, c.plot.right)
                       : make_axis(lo, hi, log, false, c.plot.bottom, c.plot.top);
  value_axis(c, a, horiz);
  std::vector<std::string> labels;
  for (const auto& g : groups) labels.push_back(g.label);
  centers = category_axis(c, labels, !horiz, band);
  frame_lines(c);
  return a;
}

// Point on the chart: `along` is the category offset from the band center.
std::pair<double, double> place(const Ctx& c, double center, double along, double value_px) {
  if (c.o.orientation == Orientation::kHorizontal) return {value_px, center + along};
  return {center + along, value_px};
}

void render_box(Ctx& c) {
  const auto groups = groups_of(c.d);
  std::vector<double> centers;
  double band = 0;
  const Axis a = group_frame(c, groups, centers, band);
  const double half = band * 0.3;
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& v = groups[gi].values;
    if (v.empty()) continue;
    const double q1 = quantile(v, 0.25), med = quantile(v, 0.5), q3 = quantile(v, 0.75);
    const double iqr = q3 - q1;
    double wlo = q3, whi = q1;
    for (double x : v) {
      if (x >= q1 - 1.5 * iqr) wlo = std::min(wlo, x);
      if (x <= q3 + 1.5 * iqr) whi = std::max(whi, x);
    }
    const double ctr = centers[gi];
    auto p = [&](double along, double val) { return place(c, ctr, along, a(val)); };
    auto [x1, y1] = p(-half, q3);
    auto [x2, y2] = p(half, q1);
    c.svg.rect(std::min(x1, x2), std::min(y1, y2), std::abs(x2 - x1), std::abs(y2 - y1), c.o.colors.bar,
               c.o.colors.border,
               fmt::format("{}: median {}, IQR {}-{}", groups[gi].label, tick_text(med), tick_text(q1), tick_text(q3)));
    auto [mx1, my1] = p(-half, med);
    auto [mx2, my2] = p(half, med);
    c.svg.line(mx1, my1, mx2, my2, c.o.colors.border, 2);
    for (auto [from, to] : {std::pair{q3, whi}, std::pair{q1, wlo}}) {
      auto [ax, ay] = p(0, from);
      auto [bx, by] = p(0, to);
      c.svg.line(ax, ay, bx, by, c.o.colors.border);
      auto [cx1, cy1] = p(-half / 2, to);
      auto [cx2, cy2] = p(half / 2, to);
      c.svg.line(cx1, cy1, cx2, cy2, c.o.colors.border);
    }
    for (double x : v) {
      if (x < wlo || x > whi) {
        auto [ox, oy] = p(0, x);
        c.svg.circle(ox, oy, 3, "none", c.o.colors.marker, tick_text(x));
      }
    }
  }
}

double silverman(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / (n - 1));
  const double iqr = quantile(v, 0.75) - quantile(v, 0.25);
  double spread = sd;
  if (iqr > 0) spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(n, -0.2);
}

void render_violin(Ctx& c) {
  const auto groups = groups_of(c.d);
  double pad = 0.0;
  std::vector<double> bws;
  for (const auto& g : groups) {
    bws.push_back(silverman(g.values));
    pad = std::max(pad, bws.back() * 2);
  }
  if (c.o.y_scale == Scale::kLog || c.o.x_scale == Scale::kLog) pad = 0.0;
  std::vector<double> centers;
  double band = 0;
  const Axis a = group_frame(c, groups, centers, band, pad);
  const double half = band * 0.45;
  constexpr int kPoints = 60;
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& v = groups[gi].values;
    if (v.empty()) continue;
    const double h = bws[gi];
    if (h <= 0.0) {
      // Degenerate density: a single line at the common value.
      auto [x1, y1] = place(c, centers[gi], -half, a(v.front()));
      auto [x2, y2] = place(c, centers[gi], half, a(v.front()));
      c.svg.line(x1, y1, x2, y2, c.o.colors.bar, 3);
      continue;
    }
    const double lo = std::max(v.front() - 2 * h, a.log ? a.d0 : -INFINITY);
    const double hi = v.back() + 2 * h;
    std::vector<double> ys(kPoints + 1), dens(kPoints + 1);
    double peak = 0.0;
    for (int i = 0; i <= kPoints; ++i) {
      const double y = lo + (hi - lo) * i / kPoints;
      double s = 0.0;
      for (double x : v) s += std::exp(-0.5 * ((y - x) / h) * ((y - x) / h));
      ys[static_cast<size_t>(i)] = y;
      dens[static_cast<size_t>(i)] = s;
      peak = std::max(peak, s);
    }
    std::string d;
    for (int i = 0; i <= kPoints; ++i) {
      auto [x, y] = place(c, centers[gi], half * dens[static_cast<size_t>(i)] / peak, a(ys[static_cast<size_t>(i)]));
      d += fmt::format("{}{} {} ", i == 0 ? 'M' : 'L', num(x), num(y));
    }
    for (int i = kPoints; i >= 0; --i) {
      auto [x, y] = place(c, centers[gi], -half * dens[static_cast<size_t>(i)] / peak, a(ys[static_cast<size_t>(i)]));
      d += fmt::format("L{} {} ", num(x), num(y));
    }
    d += "Z";
    c.svg.path(d, c.o.colors.bar, c.o.colors.border, " fill-opacity=\"0.8\"", groups[gi].label);
    auto [mx1, my1] = place(c, centers[gi], -half * 0.3, a(quantile(v, 0.5)));
    auto [mx2, my2] = place(c, centers[gi], half * 0.3, a(quantile(v, 0.5)));
    c.svg.line(mx1, my1, mx2, my2, "#ffffff", 2);
  }
}

void render_swarm(Ctx& c) {
  const auto groups = groups_of(c.d);
  std::vector<double> centers;
  double band = 0;
  const Axis a = group_frame(c, groups, centers, band);
  constexpr double r = 4.0;
  const double half = band * 0.45;
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    std::vector<std::pair<double, double>> placed;  // (value px, offset)
    for (double x : groups[gi].values) {
      const double vp = a(x);
      double chosen = 0.0;
      for (int step = 0; step < 400; ++step) {
        const double off = (step % 2 == 0 ? 1 : -1) * r * std::ceil(step / 2.0);
        if (std::abs(off) > half) {
          chosen = 0.0;
          break;
        }
        const bool clash = std::any_of(placed.begin(), placed.end(), [&](const auto& p) {
          const double dv = p.first - vp, dc = p.second - off;
          return dv * dv + dc * dc < 4 * r * r - 1e-9;
        });
        if (!clash) {
          chosen = off;
          break;
        }
      }
      placed.push_back({vp, chosen});
      auto [px, py] = place(c, centers[gi], chosen, vp);
      c.svg.circle(px, py, r, c.o.colors.marker, c.o.colors.border, fmt::format("{}: {}", groups[gi].label, tick_text(x)));
    }
  }
}

size_t column_index(const AnalysisResult& d, std::string_view name) {
  auto it = std::find(d.columns.begin(), d.columns.end(), name);
  return it == d.columns.end() ? d.columns.size() : static_cast<size_t>(it - d.columns.begin());
}

void render_scatter(Ctx& c) {
  const auto& d = c.d;
  size_t xi = column_index(d, "x"), yi = column_index(d, "y");
  size_t gi = column_index(d, "cluster");
  if (gi == d.columns.size()) gi = column_index(d, "community");
  const bool named = xi < d.columns.size() && yi < d.columns.size();
  const bool two = d.shape == ResultShape::kTable && d.columns.size() >= 2;
  if (!named && two) {
    xi = 0;
    yi = 1;
  }
  struct Pt {
    double x, y;
    int group;
    std::string label;
  };
  std::vector<Pt> pts;
  for (size_t i = 0; i < d.rows.size(); ++i) {
    const auto& r = d.rows[i];
    Pt p{};
    p.label = r.label;
    if (named || two) {
      p.x = r.values[xi];
      p.y = r.values[yi];
    } else {
      p.x = static_cast<double>(i + 1);
      p.y = row_value(d, r);
    }
    p.group = gi < d.columns.size() && d.shape == ResultShape::kTable ? static_cast<int>(r.values[gi]) : -1;
    pts.push_back(std::move(p));
  }
  auto [xlo, xhi] = std::minmax_element(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });
  auto [ylo, yhi] = std::minmax_element(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.y < b.y; });
  const Axis ax = make_axis(xlo->x, xhi->x, c.o.x_scale == Scale::kLog, false, c.plot.left, c.plot.right);
  const Axis ay = make_axis(ylo->y, yhi->y, c.o.y_scale == Scale::kLog, false, c.plot.bottom, c.plot.top);
  value_axis(c, ax, true);
  value_axis(c, ay, false);
  frame_lines(c);
  std::map<int, std::string> groups;
  for (const auto& p : pts) {
    std::string color = p.group < 0 ? c.o.colors.marker : kPalette[static_cast<size_t>(p.group) % std::size(kPalette)];
    if (p.group >= 0) groups.emplace(p.group, color);
    c.svg.circle(ax(p.x), ay(p.y), 5, color, c.o.colors.border,
                 fmt::format("{} ({}, {})", p.label, tick_text(p.x), tick_text(p.y)));
  }
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& [g, color] : groups)
    items.push_back({fmt::format("{} {}", d.columns[gi], g), color});
  legend(c, items);
}

std::string arc_point(double cx, double cy, double r, double angle) {
  return fmt::format("{} {}", num(cx + r * std::cos(angle)), num(cy + r * std::sin(angle)));
}

void render_pie(Ctx& c, bool doughnut) {
  std::vector<std::pair<std::string, double>> slices;
  double total = 0.0;
  for (const auto& r : c.d.rows) {
    const double v = row_value(c.d, r);
    if (v > 0) {
      slices.push_back({r.label, v});
      total += v;
    }
  }
  if (total <= 0.0) {
    c.svg.text(c.o.width / 2.0, c.o.height / 2.0, "no data", 18);
    return;
  }
  const double cx = (c.plot.left + c.plot.right) / 2, cy = (c.plot.top + c.plot.bottom) / 2;
  const double r = std::min(c.plot.width(), c.plot.height()) * 0.45;
  const double ri = doughnut ? r * 0.55 : 0.0;
  double angle = -std::numbers::pi / 2;
  std::vector<std::pair<std::string, std::string>> items;
  for (size_t i = 0; i < slices.size(); ++i) {
    const auto& [label, v] = slices[i];
    const double sweep = 2 * std::numbers::pi * v / total;
    const std::string color = series_color(c.o, i);
    const auto title = fmt::format("{}: {} ({:.1f}%)", label, tick_text(v), 100.0 * v / total);
    std::string d;
    if (sweep >= 2 * std::numbers::pi - 1e-9) {
      d = fmt::format("M{} A{} {} 0 1 1 {} A{} {} 0 1 1 {} Z", arc_point(cx, cy, r, angle), num(r), num(r),
                      arc_point(cx, cy, r, angle + std::numbers::pi), num(r), num(r), arc_point(cx, cy, r, angle));
      if (doughnut)
        d += fmt::format(" M{} A{} {} 0 1 0 {} A{} {} 0 1 0 {} Z", arc_point(cx, cy, ri, angle), num(ri), num(ri),
                         arc_point(cx, cy, ri, angle + std::numbers::pi), num(ri), num(ri), arc_point(cx, cy, ri, angle));
      c.svg.path(d, color, "#ffffff", " fill-rule=\"evenodd\"", title);
    } else {
      const int large = sweep > std::numbers::pi ? 1 : 0;
      if (doughnut) {
        d = fmt::format("M{} A{} {} 0 {} 1 {} L{} A{} {} 0 {} 0 {} Z", arc_point(cx, cy, r, angle), num(r), num(r),
                        large, arc_point(cx, cy, r, angle + sweep), arc_point(cx, cy, ri, angle + sweep), num(ri),
                        num(ri), large, arc_point(cx, cy, ri, angle));
      } else {
        d = fmt::format("M{} {} L{} A{} {} 0 {} 1 {} Z", num(cx), num(cy), arc_point(cx, cy, r, angle), num(r), num(r),
                        large, arc_point(cx, cy, r, angle + sweep));
      }
      c.svg.path(d, color, "#ffffff", {}, title);
    }
    items.push_back({fmt::format("{} ({:.1f}%)", label, 100.0 * v / total), color});
    angle += sweep;
  }
  legend(c, items);
}

void render_wordcloud(Ctx& c) {
  std::vector<std::pair<std::string, double>> words;
  for (const auto& r : c.d.rows) words.push_back({r.label, std::max(0.0, c.d.shape == ResultShape::kDistribution
                                                                             ? static_cast<double>(r.values.size())
                                                                             : row_total(r))});
  std::stable_sort(words.begin(), words.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  const double wmax = words.empty() ? 1.0 : std::max(words.front().second, 1e-12);
  struct Rect {
    double x0, y0, x1, y1;
  };
  std::vector<Rect> placed;
  const double cx = (c.plot.left + c.plot.right) / 2, cy = (c.plot.top + c.plot.bottom) / 2;
  for (size_t i = 0; i < words.size(); ++i) {
    const auto& [w, v] = words[i];
    const double size = 12.0 + 60.0 * v / wmax;
    const double tw = size * 0.6 * static_cast<double>(w.size());
    const double th = size;
    for (int step = 0; step < 4000; ++step) {
      const double t = step * 0.1;
      const double x = cx + 4.0 * t * std::cos(t);
      const double y = cy + 3.0 * t * std::sin(t);
      Rect rc{x - tw / 2, y - th * 0.8, x + tw / 2, y + th * 0.2};
      if (rc.x0 < c.plot.left || rc.x1 > c.plot.right || rc.y0 < c.plot.top || rc.y1 > c.plot.bottom) continue;
      const bool clash = std::any_of(placed.begin(), placed.end(), [&](const Rect& o) {
        return rc.x0 < o.x1 && o.x0 < rc.x1 && rc.y0 < o.y1 && o.y0 < rc.y1;
      });
      if (clash) continue;
      placed.push_back(rc);
      c.svg.text(x, y, w, static_cast<int>(std::lround(size)), "middle", 0,
                 i == 0 ? c.o.colors.bar : kPalette[i % std::size(kPalette)]);
      break;
    }
  }
}

void render_network(Ctx& c) {
  std::vector<std::string> nodes;
  struct Link {
    size_t a, b;
    double w;
  };
  std::vector<Link> links;
  std::map<std::string, size_t> index;
  auto node = [&](const std::string& n) {
    auto [it, fresh] = index.emplace(n, nodes.size());
    if (fresh) nodes.push_back(n);
    return it->second;
  };
  if (auto g = c.d.meta.find("graph"); g != c.d.meta.end()) {
    const auto j = nlohmann::json::parse(g->second);
    for (const auto& n : j.at("nodes")) node(n.at("id").get<std::string>());
    for (const auto& l : j.at("links"))
      links.push_back({node(l.at("source").get<std::string>()), node(l.at("target").get<std::string>()),
                       l.at("weight").get<double>()});
  } else if (c.d.shape == ResultShape::kTable && c.d.columns.size() > 1) {
    for (const auto& r : c.d.rows) node(r.label);
    for (const auto& col : c.d.columns) node(col);
    for (const auto& r : c.d.rows)
      for (size_t i = 0; i < c.d.columns.size(); ++i)
        if (r.values[i] > 0) links.push_back({index.at(r.label), index.at(c.d.columns[i]), r.values[i]});
  } else {
    for (const auto& r : c.d.rows) node(r.label);
  }
  // Node sizes come from the result rows when they describe nodes.
  std::vector<double> size(nodes.size(), 0.0);
  std::vector<int> group(nodes.size(), -1);
  const bool communities = c.d.kind == "communities";
  for (const auto& r : c.d.rows) {
    auto it = index.find(r.label);
    if (it == index.end() || r.values.empty()) continue;
    if (communities) {
      group[it->second] = static_cast<int>(r.values[0]);
    } else {
      size[it->second] = row_value(c.d, r);
    }
  }
  if (std::all_of(size.begin(), size.end(), [](double s) { return s == 0.0; })) {
    for (const auto& l : links) {
      size[l.a] += 1;
      size[l.b] += 1;
    }
  }
  const double smax = std::max(1e-12, *std::max_element(size.begin(), size.end()));
  double wmax = 1e-12;
  for (const auto& l : links) wmax = std::max(wmax, l.w);

  const double cx = (c.plot.left + c.plot.right) / 2, cy = (c.plot.top + c.plot.bottom) / 2;
  const double rad = std::min(c.plot.width(), c.plot.height()) * 0.4;
  const size_t n = nodes.size();
  std::vector<std::pair<double, double>> pos(n);
  for (size_t i = 0; i < n; ++i) {
    const double t = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    pos[i] = {cx + rad * std::cos(t), cy + rad * std::sin(t)};
  }
  for (const auto& l : links)
    c.svg.line(pos[l.a].first, pos[l.a].second, pos[l.b].first, pos[l.b].second, "#999999", 1.0 + 4.0 * l.w / wmax,
               " stroke-opacity=\"0.6\"");
  std::map<int, std::string> legend_groups;
  for (size_t i = 0; i < n; ++i) {
    std::string color = c.o.colors.bar;
    if (group[i] >= 0) {
      color = kPalette[static_cast<size_t>(group[i]) % std::size(kPalette)];
      legend_groups.emplace(group[i], color);
    }
    c.svg.circle(pos[i].first, pos[i].second, 5.0 + 15.0 * size[i] / smax, color, c.o.colors.border,
                 fmt::format("{}: {}", nodes[i], tick_text(size[i])));
    if (n <= 60) c.svg.text(pos[i].first, pos[i].second - 22, nodes[i], c.o.ticks.fontsize);
  }
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& [g, color] : legend_groups) items.push_back({fmt::format("community {}", g), color});
  legend(c, items);
}

// Tile map: one tile per country shaded by value.
void render_worldmap(Ctx& c) {
  std::vector<std::pair<std::string, double>> cells;
  for (const auto& r : c.d.rows) cells.push_back({r.label, row_value(c.d, r)});
  const size_t n = cells.size();
  const auto cols = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(n) * 1.5)));
  const size_t rows = (n + cols - 1) / cols;
  const double tw = c.plot.width() / static_cast<double>(cols);
  const double th = std::min(c.plot.height() / static_cast<double>(rows), tw);
  double vmax = 1e-12;
  for (const auto& [_, v] : cells) vmax = std::max(vmax, v);
  for (size_t i = 0; i < n; ++i) {
    const double x = c.plot.left + tw * static_cast<double>(i % cols);
    const double y = c.plot.top + th * static_cast<double>(i / cols);
    const double alpha = 0.15 + 0.85 * std::max(0.0, cells[i].second) / vmax;
    c.svg.raw(fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"{}\" "
                          "stroke=\"{}\"><title>{}</title></rect>\n",
                          num(x + 2), num(y + 2), num(tw - 4), num(th - 4), c.o.colors.bar, num(alpha),
                          c.o.colors.border, esc(fmt::format("{}: {}", cells[i].first, tick_text(cells[i].second)))));
    c.svg.text(x + tw / 2, y + th / 2, cells[i].first, c.o.ticks.fontsize);
    c.svg.text(x + tw / 2, y + th / 2 + c.o.ticks.fontsize + 2, tick_text(cells[i].second), c.o.ticks.fontsize);
  }
}

bool cartesian(ChartType t) {
  switch (t) {
    case ChartType::kBar:
    case ChartType::kLine:
    case ChartType::kBox:
    case ChartType::kViolin:
    case ChartType::kSwarm:
    case ChartType::kScatter:
    case ChartType::kStack:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string render_svg(const ChartSpec& spec, Background background) {
  const auto& o = spec.options;
  Svg svg(o.width, o.height);
  if (background == Background::kWhite) svg.rect(0, 0, o.width, o.height, "#ffffff");
  const bool wide_legend = o.legend_visible;
  Box plot{90.0, 70.0, o.width - (wide_legend ? 240.0 : 40.0), o.height - 110.0};
  Ctx c{spec, o, spec.data, svg, plot};
  if (o.title.visible && !o.title.text.empty())
    svg.text(o.width / 2.0, 16.0 + o.title.fontsize, o.title.text, o.title.fontsize);

  const bool empty = spec.data.rows.empty() ||
                     (spec.data.shape == ResultShape::kDistribution &&
                      std::all_of(spec.data.rows.begin(), spec.data.rows.end(),
                                  [](const ResultRow& r) { return r.values.empty(); }));
  if (empty) {
    frame_lines(c);
    axis_titles(c);
    svg.text((plot.left + plot.right) / 2, (plot.top + plot.bottom) / 2, "no data", 18);
    return svg.finish();
  }
  switch (o.chart_type) {
    case ChartType::kBar: render_bars(c, false); break;
    case ChartType::kStack: render_bars(c, true); break;
    case ChartType::kLine: render_line(c); break;
    case ChartType::kBox: render_box(c); break;
    case ChartType::kViolin: render_violin(c); break;
    case ChartType::kSwarm: render_swarm(c); break;
    case ChartType::kScatter: render_scatter(c); break;
    case ChartType::kPie: render_pie(c, false); break;
    case ChartType::kDoughnut: render_pie(c, true); break;
    case ChartType::kWordcloud: render_wordcloud(c); break;
    case ChartType::kNetwork: render_network(c); break;
    case ChartType::kWorldmap: render_worldmap(c); break;
  }
  if (cartesian(o.chart_type)) axis_titles(c);
  return svg.finish();
}

}  // namespace scholarscope::viz
