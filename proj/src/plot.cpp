#include "pedmotion/plot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace pedmotion {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1"};

const char* color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string escape(std::string_view s) {
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

std::string num(double v) { return fmt::format("{:.2f}", v); }

// Rounds the axis maximum up to 1, 2 or 5 times a power of ten.
double nice_max(double v) {
  if (!(v > 0.0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (v <= m * p) return m * p;
  }
  return 10.0 * p;
}

struct Canvas {
  std::string body;
  double ymin = 0.0;
  double ymax = 1.0;

  double plot_w() const { return kWidth - kLeft - kRight; }
  double plot_h() const { return kHeight - kTop - kBottom; }
  double y(double v) const { return kTop + plot_h() * (1.0 - (v - ymin) / (ymax - ymin)); }

  void frame(std::string_view title, std::string_view ylabel) {
    body += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                        num(kWidth / 2.0), escape(title));
    body += fmt::format("<text x=\"16\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 16 {})\" "
                        "text-anchor=\"middle\">{}</text>\n",
                        num(kTop + plot_h() / 2.0), num(kTop + plot_h() / 2.0), escape(ylabel));
    for (int i = 0; i <= 4; ++i) {
      const double v = ymin + (ymax - ymin) * i / 4.0;
      body += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n", num(kLeft), num(y(v)),
                          num(kWidth - kRight), num(y(v)));
      body += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
                          num(kLeft - 6.0), num(y(v) + 4.0), v);
    }
    body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
                        num(kLeft), num(kTop), num(plot_w()), num(plot_h()));
  }

  void legend(const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double x = kLeft + 10.0 + 110.0 * static_cast<double>(i);
      const double yy = kHeight - 18.0;
      body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", num(x), num(yy - 9.0),
                          color(i));
      body += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n", num(x + 14.0), num(yy),
                          escape(labels[i]));
    }
  }

  std::string finish() const {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{2}</svg>\n",
        kWidth, kHeight, body);
  }
};

// Grouped bars: groups[g][s] is the value of series s in group g.
std::string grouped_bars(std::string_view title, std::string_view ylabel, const std::vector<std::string>& groups,
                         const std::vector<std::string>& series, const std::vector<std::vector<double>>& values) {
  Canvas c;
  double top = 0.0;
  for (const auto& row : values) {
    for (double v : row) top = std::max(top, v);
  }
  c.ymax = nice_max(top);
  c.frame(title, ylabel);
  const double group_w = c.plot_w() / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  const double bar_w = 0.8 * group_w / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  for (std::size_t s = 0; s < series.size(); ++s) {
    c.body += fmt::format("<g class=\"series\" data-label=\"{}\" fill=\"{}\">\n", escape(series[s]), color(s));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const double v = values[g][s];
      const double x = kLeft + group_w * (static_cast<double>(g) + 0.1) + bar_w * static_cast<double>(s);
      c.body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"><title>{}: {}</title></rect>\n",
                            num(x), num(c.y(v)), num(bar_w), num(c.y(0.0) - c.y(v)), escape(groups[g]),
                            fmt::format("{:.6g}", v));
    }
    c.body += "</g>\n";
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    c.body += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                          num(kLeft + group_w * (static_cast<double>(g) + 0.5)), num(kHeight - kBottom + 16.0),
                          escape(groups[g]));
  }
  c.legend(series);
  return c.finish();
}

}  // namespace

std::string plot_tag_distribution(const TagDistribution& dist) {
  std::vector<std::string> groups;
  std::vector<std::vector<double>> values;
  for (BehaviorClass cls : kBehaviorClasses) {
    groups.emplace_back(to_string(cls));
    std::vector<double> row;
    const auto it = dist.primary_counts.find(cls);
    for (const std::string& tag : dist.tags) {
      double v = 0.0;
      if (it != dist.primary_counts.end()) {
        if (const auto t = it->second.find(tag); t != it->second.end()) v = static_cast<double>(t->second);
      }
      row.push_back(v);
    }
    values.push_back(std::move(row));
  }
  return grouped_bars(fmt::format("Behavior tags per class (n={})", dist.total), "motions", groups, dist.tags, values);
}

std::string plot_class_curves(const TrajectoryStats& stats) {
  Canvas c;
  double lo = 0.0;
  double hi = 0.0;
  for (const ClassCurve& curve : stats.classes) {
    for (std::size_t i = 0; i < curve.mean.size(); ++i) {
      const double sd = std::sqrt(curve.variance[i]);
      lo = std::min(lo, curve.mean[i] - sd);
      hi = std::max(hi, curve.mean[i] + sd);
    }
  }
  c.ymin = lo < 0.0 ? -nice_max(-lo) : 0.0;
  c.ymax = nice_max(hi);
  c.frame("Forward displacement by class", "displacement (m)");
  const double n = static_cast<double>(std::max<std::size_t>(stats.samples, 2) - 1);
  auto x = [&](std::size_t i) { return kLeft + c.plot_w() * static_cast<double>(i) / n; };
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < stats.classes.size(); ++k) {
    const ClassCurve& curve = stats.classes[k];
    const std::string label = fmt::format("{} (n={})", to_string(curve.cls), curve.count);
    labels.push_back(label);
    std::string band;
    std::string line;
    for (std::size_t i = 0; i < curve.mean.size(); ++i) {
      band += fmt::format("{}{},{}", i ? " " : "", num(x(i)), num(c.y(curve.mean[i] + std::sqrt(curve.variance[i]))));
      line += fmt::format("{}{},{}", i ? " " : "", num(x(i)), num(c.y(curve.mean[i])));
    }
    for (std::size_t i = curve.mean.size(); i-- > 0;) {
      band += fmt::format(" {},{}", num(x(i)), num(c.y(curve.mean[i] - std::sqrt(curve.variance[i]))));
    }
    c.body += fmt::format("<g class=\"series\" data-label=\"{}\">\n", escape(label));
    c.body += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n", band,
                          color(k));
    c.body += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", line, color(k));
    c.body += "</g>\n";
  }
  c.body += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">normalized arc length</text>\n",
                        num(kLeft + c.plot_w() / 2.0), num(kHeight - kBottom + 16.0));
  c.legend(labels);
  return c.finish();
}

std::string plot_report(const MetricsReport& report) {
  std::vector<std::string> groups;
  std::vector<std::vector<double>> values;
  for (const RunMetrics& m : report.runs) {
    groups.push_back(fmt::format("{} #{}", m.scenario, m.seed));
    values.push_back({m.collisions_per_km, m.fpbr});
  }
  return grouped_bars("Per-run safety metrics", "value", groups, {"Collisions/km", "FPBR"}, values);
}

}  // namespace pedmotion
