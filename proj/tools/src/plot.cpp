#include "reicqed/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "reicqed/cli/output.hpp"
#include "reicqed/errors.hpp"

namespace reicqed::cli {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 84, kTop = 40, kBottom = 64;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) std::snprintf(buf, sizeof buf, "%.0e", v);
  else std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse(const std::string& cell, const std::string& source) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(source + ": non-numeric cell '" + cell + "'");
  }
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double a = 0, b = 1;  // pixel range

  double map(double v) const {
    const double u = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
    return a + (b - a) * u;
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int d0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      const int d1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      const int stride = std::max(1, (d1 - d0 + 1) / 8);
      for (int d = d0; d <= d1; d += stride) t.push_back(std::pow(10.0, d));
      return t;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
  }
};

Axis make_axis(std::vector<double> values, bool log, double a, double b) {
  Axis ax;
  ax.log = log;
  ax.a = a, ax.b = b;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  ax.lo = *mn, ax.hi = *mx;
  if (ax.hi == ax.lo) {
    const double pad = log ? 0.0 : std::max(1e-12, std::abs(ax.lo) * 0.05 + 1e-12);
    if (log) ax.lo /= 2, ax.hi *= 2;
    else ax.lo -= pad, ax.hi += pad;
  }
  return ax;
}

void frame(std::ostringstream& s, const Axis& x, const Axis& y, const std::string& xl, const std::string& yl,
           const std::string& title) {
  s << "<rect x=\"" << fmt(x.a) << "\" y=\"" << fmt(y.b) << "\" width=\"" << fmt(x.b - x.a) << "\" height=\""
    << fmt(y.a - y.b) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (double t : x.ticks()) {
    const double px = x.map(t);
    s << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(y.a) << "\" x2=\"" << fmt(px) << "\" y2=\"" << fmt(y.a + 5)
      << "\" stroke=\"#000\"/>\n<text x=\"" << fmt(px) << "\" y=\"" << fmt(y.a + 18)
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : y.ticks()) {
    const double py = y.map(t);
    s << "<line x1=\"" << fmt(x.a - 5) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(x.a) << "\" y2=\"" << fmt(py)
      << "\" stroke=\"#000\"/>\n<text x=\"" << fmt(x.a - 8) << "\" y=\"" << fmt(py + 4)
      << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  s << "<text x=\"" << fmt(0.5 * (x.a + x.b)) << "\" y=\"" << fmt(kHeight - 18) << "\" text-anchor=\"middle\">"
    << esc(xl) << "</text>\n";
  s << "<text transform=\"translate(20," << fmt(0.5 * (y.a + y.b)) << ") rotate(-90)\" text-anchor=\"middle\">"
    << esc(yl) << "</text>\n";
  if (!title.empty()) {
    s << "<text x=\"" << fmt(0.5 * (x.a + x.b)) << "\" y=\"24\" text-anchor=\"middle\" font-weight=\"bold\">"
      << esc(title) << "</text>\n";
  }
}

std::string header() {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  return s.str();
}

std::string line_plot(const CsvData& d, const LinePlot& p, const std::string& src) {
  if (p.y.empty()) throw ValidationError("line plot needs at least one series");
  const auto ix = d.column(p.x, src);
  std::vector<std::size_t> iy;
  for (const auto& y : p.y) iy.push_back(d.column(y, src));
  std::vector<double> xs;
  std::vector<std::vector<double>> ys(iy.size());
  for (const auto& row : d.rows) {
    const double x = parse(row[ix], src) * p.x_scale;
    std::vector<double> vals;
    bool ok = std::isfinite(x) && (!p.log_x || x > 0.0);
    for (auto i : iy) {
      vals.push_back(parse(row[i], src) * p.y_scale);
      ok = ok && std::isfinite(vals.back()) && (!p.log_y || vals.back() > 0.0);
    }
    if (!ok) continue;
    xs.push_back(x);
    for (std::size_t k = 0; k < iy.size(); ++k) ys[k].push_back(vals[k]);
  }
  if (xs.empty()) throw ValidationError(src + ": no plottable data");
  std::vector<double> all;
  for (const auto& y : ys) all.insert(all.end(), y.begin(), y.end());
  const Axis ax = make_axis(xs, p.log_x, kLeft, kWidth - 24);
  const Axis ay = make_axis(all, p.log_y, kHeight - kBottom, kTop);
  std::ostringstream s;
  s << header();
  frame(s, ax, ay, p.x_label, p.y_label, p.title);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    s << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[k % 6] << "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? " " : "") << fmt(ax.map(xs[i])) << "," << fmt(ay.map(ys[k][i]));
    s << "\"/>\n";
    if (ys.size() > 1) {
      const double ly = kTop + 16 + 16 * static_cast<double>(k);
      s << "<line x1=\"" << fmt(kWidth - 150) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(kWidth - 126) << "\" y2=\""
        << fmt(ly) << "\" stroke=\"" << kPalette[k % 6] << "\" stroke-width=\"2\"/>\n<text x=\"" << fmt(kWidth - 120)
        << "\" y=\"" << fmt(ly + 4) << "\">" << esc(p.y[k]) << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string color(double u) {
  static const double stops[][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  u = std::clamp(u, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(u));
  const double f = u - i;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

std::string heatmap(const CsvData& d, const Heatmap& p, const std::string& src) {
  const auto ix = d.column(p.x, src), iy = d.column(p.y, src), iz = d.column(p.z, src);
  if (d.rows.empty()) throw ValidationError(src + ": no plottable data");
  std::map<std::pair<double, double>, double> cells;
  std::vector<double> xs, ys;
  double zmin = INFINITY, zmax = -INFINITY;
  for (const auto& row : d.rows) {
    const double x = parse(row[ix], src) * p.x_scale, y = parse(row[iy], src) * p.y_scale, z = parse(row[iz], src);
    cells[{x, y}] = z;
    xs.push_back(x), ys.push_back(y);
    zmin = std::min(zmin, z), zmax = std::max(zmax, z);
  }
  auto uniq = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  xs = uniq(xs), ys = uniq(ys);
  if (xs.size() < 2 || ys.size() < 2 || cells.size() != xs.size() * ys.size()) {
    throw ValidationError(src + ": heatmap needs a complete rectangular grid");
  }
  if (zmax == zmin) zmax = zmin + 1.0;
  const Axis ax = make_axis(xs, false, kLeft, kWidth - 110);
  const Axis ay = make_axis(ys, false, kHeight - kBottom, kTop);
  std::ostringstream s;
  s << header();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x0 = ax.map(i ? 0.5 * (xs[i - 1] + xs[i]) : xs[0]);
    const double x1 = ax.map(i + 1 < xs.size() ? 0.5 * (xs[i] + xs[i + 1]) : xs[i]);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double y0 = ay.map(j ? 0.5 * (ys[j - 1] + ys[j]) : ys[0]);
      const double y1 = ay.map(j + 1 < ys.size() ? 0.5 * (ys[j] + ys[j + 1]) : ys[j]);
      s << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y1) << "\" width=\"" << fmt(x1 - x0 + 0.3) << "\" height=\""
        << fmt(y0 - y1 + 0.3) << "\" fill=\"" << color((cells[{xs[i], ys[j]}] - zmin) / (zmax - zmin)) << "\"/>\n";
    }
  }
  frame(s, ax, ay, p.x_label, p.y_label, p.title);
  const double bx = kWidth - 90, bw = 16;
  for (int k = 0; k < 64; ++k) {
    const double y0 = ay.a + (ay.b - ay.a) * k / 64.0, y1 = ay.a + (ay.b - ay.a) * (k + 1) / 64.0;
    s << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(y1) << "\" width=\"" << bw << "\" height=\"" << fmt(y0 - y1 + 0.3)
      << "\" fill=\"" << color((k + 0.5) / 64.0) << "\"/>\n";
  }
  s << "<text x=\"" << fmt(bx + bw + 4) << "\" y=\"" << fmt(ay.a) << "\">" << tick_label(zmin) << "</text>\n";
  s << "<text x=\"" << fmt(bx + bw + 4) << "\" y=\"" << fmt(ay.b + 10) << "\">" << tick_label(zmax) << "</text>\n";
  s << "<text transform=\"translate(" << fmt(kWidth - 8) << "," << fmt(0.5 * (ay.a + ay.b))
    << ") rotate(-90)\" text-anchor=\"middle\">" << esc(p.z_label) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace

void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& svg_path) {
  const auto d = read_csv(csv_path);
  const std::string svg = std::holds_alternative<LinePlot>(spec) ? line_plot(d, std::get<LinePlot>(spec), csv_path)
                                                                 : heatmap(d, std::get<Heatmap>(spec), csv_path);
  write_file(svg_path, svg);
}

}  // namespace reicqed::cli
