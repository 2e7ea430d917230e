#pragma once

// Minimal deterministic SVG line plots: fixed canvas, axes with ticks, one
// polyline per series, legend. Identical input gives identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cimlmg/errors.hpp"
#include "cimlmg/report/csv.hpp"
#include "cimlmg/report/hash.hpp"
#include "cimlmg/report/ini.hpp"

namespace cimlmg::report {

/// Plot description, written as `key=value` pairs separated by ';' or newlines:
///   x=t; y=qfi,inv_var; logy=true; group=model; title=...; xlabel=...; ylabel=...
struct PlotSpec {
  std::string x;
  std::vector<std::string> y;
  std::string group;  // text column splitting rows into series
  bool logx = false;
  bool logy = false;
  std::string title;
  std::string xlabel;
  std::string ylabel;
};

inline PlotSpec parse_plot_spec(std::string_view text) {
  PlotSpec spec;
  auto parse_bool = [](std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidParameter("plot spec: " + std::string(key) + " expects true/false");
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find_first_of(";\n", pos);
    const auto item = detail::trim(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (!item.empty() && item.front() != '#') {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidParameter("plot spec: expected key=value, got '" + std::string(item) + "'");
      }
      const auto key = detail::trim(item.substr(0, eq));
      const auto value = detail::trim(item.substr(eq + 1));
      if (key == "x") {
        spec.x = value;
      } else if (key == "y") {
        spec.y.clear();
        std::size_t p = 0;
        while (p <= value.size()) {
          const auto c = value.find(',', p);
          const auto name = detail::trim(value.substr(p, c == std::string_view::npos ? c : c - p));
          if (!name.empty()) spec.y.emplace_back(name);
          if (c == std::string_view::npos) break;
          p = c + 1;
        }
      } else if (key == "group") {
        spec.group = value;
      } else if (key == "logx") {
        spec.logx = parse_bool(key, value);
      } else if (key == "logy") {
        spec.logy = parse_bool(key, value);
      } else if (key == "title") {
        spec.title = value;
      } else if (key == "xlabel") {
        spec.xlabel = value;
      } else if (key == "ylabel") {
        spec.ylabel = value;
      } else {
        throw InvalidParameter("plot spec: unknown key '" + std::string(key) + "'");
      }
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  if (spec.x.empty() || spec.y.empty()) throw InvalidParameter("plot spec: x and y are required");
  return spec;
}

/// Accepts either inline spec text or the path of a file holding it.
inline PlotSpec load_plot_spec(const std::string& arg) {
  std::error_code ec;
  if (arg.find('=') == std::string::npos && std::filesystem::is_regular_file(arg, ec)) {
    return parse_plot_spec(read_file(arg));
  }
  return parse_plot_spec(arg);
}

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double d = std::ceil(lo); d <= std::floor(hi) + 1e-9; d += 1.0) t.push_back(std::pow(10.0, d));
      if (t.size() < 2) {
        t = {std::pow(10.0, lo), std::pow(10.0, hi)};
      }
      return t;
    }
    for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
    return t;
  }
};

inline Axis make_axis(const std::vector<Series>& series, bool use_x, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && !(v > 0.0))) continue;
      const double a = log ? std::log10(v) : v;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  if (!std::isfinite(lo)) throw SchemaError("plot: no plottable values");
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

}  // namespace detail

inline std::string render_svg(const CsvTable& table, const PlotSpec& spec) {
  if (table.empty()) throw SchemaError("plot: empty input (header only, no data rows)");
  const auto xs = table.numeric(spec.x);
  std::vector<detail::Series> series;
  std::vector<std::string> groups;
  std::vector<std::string> group_col;
  if (!spec.group.empty()) {
    group_col = table.text(spec.group);
    for (const auto& g : group_col) {
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
  } else {
    groups.emplace_back();
  }
  for (const auto& yname : spec.y) {
    const auto ys = table.numeric(yname);
    for (const auto& g : groups) {
      detail::Series s;
      s.label = g.empty() ? yname : (spec.y.size() > 1 ? yname + " " + g : g);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!g.empty() && group_col[i] != g) continue;
        s.x.push_back(xs[i]);
        s.y.push_back(ys[i]);
      }
      series.push_back(std::move(s));
    }
  }

  constexpr double W = 800, H = 500, L = 80, R = 170, T = 40, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  const auto ax = detail::make_axis(series, true, spec.logx);
  const auto ay = detail::make_axis(series, false, spec.logy);
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  auto px = [&](double v) { return L + ax.map(v) * pw; };
  auto py = [&](double v) { return T + (1.0 - ay.map(v)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  o << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const char* label_fmt = "%.4g";
  for (double t : ax.ticks()) {
    const std::string x = detail::fmt("%.2f", px(t));
    o << "<line x1=\"" << x << "\" y1=\"" << T + ph << "\" x2=\"" << x << "\" y2=\"" << T + ph + 5
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << x << "\" y=\"" << T + ph + 20 << "\" font-size=\"12\" text-anchor=\"middle\">"
      << detail::fmt(label_fmt, t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const std::string y = detail::fmt("%.2f", py(t));
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << L - 8 << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\"end\" dominant-baseline=\"middle\">"
      << detail::fmt(label_fmt, t) << "</text>\n";
  }
  const std::string xlabel = spec.xlabel.empty() ? spec.x : spec.xlabel;
  o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" font-size=\"14\" text-anchor=\"middle\">"
    << detail::escape_xml(xlabel) << "</text>\n";
  if (!spec.ylabel.empty()) {
    o << "<text x=\"20\" y=\"" << T + ph / 2 << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << T + ph / 2 << ")\">" << detail::escape_xml(spec.ylabel) << "</text>\n";
  }
  if (!spec.title.empty()) {
    o << "<text x=\"" << L + pw / 2 << "\" y=\"25\" font-size=\"16\" text-anchor=\"middle\">"
      << detail::escape_xml(spec.title) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
          << "\"/>\n";
        points.clear();
      }
    };
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double x = series[s].x[i], y = series[s].y[i];
      const bool ok = std::isfinite(x) && std::isfinite(y) && (!spec.logx || x > 0.0) && (!spec.logy || y > 0.0);
      if (!ok) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += detail::fmt("%.2f", px(x)) + "," + detail::fmt("%.2f", py(y));
    }
    flush();
    const double ly = T + 10 + 20.0 * static_cast<double>(s);
    o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 35 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R + 40 << "\" y=\"" << ly << "\" font-size=\"12\" dominant-baseline=\"middle\">"
      << detail::escape_xml(series[s].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace cimlmg::report
