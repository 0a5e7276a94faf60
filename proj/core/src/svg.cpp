#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "tsnsim/export.hpp"

namespace tsnsim {
namespace {

// high / medium / low priority convention, extra colors for custom sets
constexpr const char* kColors[] = {"#1f4fd1", "#7b2cbf", "#d6218f", "#2a9d8f", "#e76f51", "#6c757d", "#264653", "#f4a261"};

constexpr double kWidth = 820;
constexpr double kHeight = 520;
constexpr double kLeft = 80;
constexpr double kRight = 200;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
  return s;
}

struct Axis {
  double lo;
  double hi;
  double px_lo;
  double px_hi;
  double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

std::string nice_label(double us) {
  char buf[32];
  if (us >= 100) {
    std::snprintf(buf, sizeof buf, "%.0f", us);
  } else if (us >= 10) {
    std::snprintf(buf, sizeof buf, "%.1f", us);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", us);
  }
  return buf;
}

std::string frame(const Axis& x, const Axis& y) {
  std::string s;
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) +
       "\" height=\"" + num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
  (void)x;
  (void)y;
  return s;
}

}  // namespace

std::string ccdf_svg(const RunResult& r, const SvgOptions& opt) {
  const double floor_p = std::max(opt.min_probability, 1e-12);
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool any = false;
  for (const auto& s : r.streams) {
    if (!s.stats) continue;
    lo = any ? std::min(lo, s.stats->min) : s.stats->min;
    hi = any ? std::max(hi, s.stats->max) : s.stats->max;
    any = true;
  }
  if (!any) {
    lo = 0;
    hi = 1000;
  }
  if (hi <= lo) hi = lo + 1000;
  const double pad = static_cast<double>(hi - lo) * 0.05;
  const Axis x{(static_cast<double>(lo) - pad) / 1e3, (static_cast<double>(hi) + pad) / 1e3, kLeft, kWidth - kRight};
  const Axis y{std::log10(floor_p), 0.0, kHeight - kBottom, kTop};

  std::string s = header(opt.title.empty() ? "Latency CCDF" : opt.title);
  s += frame(x, y);
  for (int e = static_cast<int>(std::ceil(std::log10(floor_p))); e <= 0; ++e) {
    const double py = y.map(e);
    s += "<line x1=\"" + num(kLeft) + "\" x2=\"" + num(kWidth - kRight) + "\" y1=\"" + num(py) + "\" y2=\"" + num(py) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">1e" + std::to_string(e) + "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = x.lo + (x.hi - x.lo) * i / 5.0;
    const double px = x.map(v);
    s += "<line x1=\"" + num(px) + "\" x2=\"" + num(px) + "\" y1=\"" + num(kHeight - kBottom) + "\" y2=\"" +
         num(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(px) + "\" y=\"" + num(kHeight - kBottom + 18) + "\" text-anchor=\"middle\">" + nice_label(v) + "</text>\n";
  }
  s += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 15) +
       "\" text-anchor=\"middle\">latency [us]</text>\n";
  s += "<text x=\"18\" y=\"" + num((kTop + kHeight - kBottom) / 2) + "\" transform=\"rotate(-90 18 " +
       num((kTop + kHeight - kBottom) / 2) + ")\" text-anchor=\"middle\">P(latency &gt; x)</text>\n";

  double legend_y = kTop + 10;
  for (std::size_t i = 0; i < r.streams.size(); ++i) {
    const auto& st = r.streams[i];
    const char* color = kColors[i % (sizeof kColors / sizeof kColors[0])];
    std::string label = st.name;
    if (st.records.empty()) {
      label += " (no samples)";
    } else {
      // Staircase through the CCDF points.
      const auto pts = ccdf(st.latencies());
      std::string path;
      double prev_py = y.map(0.0);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double px = x.map(static_cast<double>(pts[k].first) / 1e3);
        const double py = y.map(std::log10(std::max(pts[k].second, floor_p)));
        path += (k == 0 ? "M" : " H") + num(px) + (k == 0 ? "," + num(prev_py) : "") + " V" + num(py);
        prev_py = py;
      }
      s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }
    s += "<line x1=\"" + num(kWidth - kRight + 12) + "\" x2=\"" + num(kWidth - kRight + 32) + "\" y1=\"" + num(legend_y) +
         "\" y2=\"" + num(legend_y) + "\" stroke=\"" + color + "\" stroke-width=\"3\"" +
         (st.records.empty() ? " stroke-dasharray=\"3 3\"" : "") + "/>\n";
    s += "<text x=\"" + num(kWidth - kRight + 38) + "\" y=\"" + num(legend_y + 4) + "\">" + escape(label) + "</text>\n";
    legend_y += 18;
  }
  s += "</svg>\n";
  return s;
}

std::string boxplot_svg(const std::vector<BoxSeries>& series, const std::string& title, const std::string& y_label) {
  std::string s = header(title);
  double lo = 1e300;
  double hi = 0;
  std::vector<std::optional<BoxStats>> boxes;
  for (const auto& b : series) {
    if (b.values.empty()) {
      boxes.emplace_back();
      continue;
    }
    boxes.emplace_back(box_stats(b.values));
    const auto [mn, mx] = std::minmax_element(b.values.begin(), b.values.end());
    lo = std::min(lo, static_cast<double>(std::max<std::int64_t>(*mn, 1)));
    hi = std::max(hi, static_cast<double>(std::max<std::int64_t>(*mx, 1)));
  }
  if (hi <= 0) {
    lo = 1;
    hi = 10;
  }
  const double elo = std::floor(std::log10(lo));
  const double ehi = std::max(std::ceil(std::log10(hi)), elo + 1);
  const Axis y{elo, ehi, kHeight - kBottom, kTop};
  const double plot_w = kWidth - kLeft - 40;
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) + "\" height=\"" +
       num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(elo); e <= static_cast<int>(ehi); ++e) {
    const double py = y.map(e);
    s += "<line x1=\"" + num(kLeft) + "\" x2=\"" + num(kLeft + plot_w) + "\" y1=\"" + num(py) + "\" y2=\"" + num(py) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">1e" + std::to_string(e) + "</text>\n";
  }
  s += "<text x=\"18\" y=\"" + num((kTop + kHeight - kBottom) / 2) + "\" transform=\"rotate(-90 18 " +
       num((kTop + kHeight - kBottom) / 2) + ")\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";
  const double slot = plot_w / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  auto ly = [&](std::int64_t v) { return y.map(std::log10(static_cast<double>(std::max<std::int64_t>(v, 1)))); };
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    const double half = std::min(slot * 0.3, 30.0);
    const char* color = kColors[i % 3];
    s += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kBottom + 14) + "\" text-anchor=\"end\" font-size=\"9\" transform=\"rotate(-30 " +
         num(cx) + " " + num(kHeight - kBottom + 14) + ")\">" + escape(series[i].label) +
         (boxes[i] ? "" : " (no samples)") + "</text>\n";
    if (!boxes[i]) continue;
    const BoxStats& b = *boxes[i];
    s += "<line x1=\"" + num(cx) + "\" x2=\"" + num(cx) + "\" y1=\"" + num(ly(b.whisker_low)) + "\" y2=\"" +
         num(ly(b.whisker_high)) + "\" stroke=\"black\"/>\n";
    s += "<rect x=\"" + num(cx - half) + "\" y=\"" + num(ly(b.q3)) + "\" width=\"" + num(2 * half) + "\" height=\"" +
         num(std::max(ly(b.q1) - ly(b.q3), 1.0)) + "\" fill=\"" + color + "\" fill-opacity=\"0.35\" stroke=\"" + color + "\"/>\n";
    s += "<line x1=\"" + num(cx - half) + "\" x2=\"" + num(cx + half) + "\" y1=\"" + num(ly(b.median)) + "\" y2=\"" +
         num(ly(b.median)) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (std::int64_t o : b.outliers) {
      s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(ly(o)) + "\" r=\"2\" fill=\"none\" stroke=\"" + color + "\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace tsnsim
