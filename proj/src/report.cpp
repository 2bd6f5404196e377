#include "edd/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "edd/text.hpp"

namespace edd {

namespace {

constexpr std::array<double Metrics::*, 7> kMetricFields = {
    &Metrics::accuracy,          &Metrics::precision_distracted,
    &Metrics::recall_distracted, &Metrics::f1_distracted,
    &Metrics::precision_driving, &Metrics::recall_driving,
    &Metrics::f1_driving};

constexpr std::array<const char*, 7> kMetricLabels = {
    "accuracy",
    "precision (distracted)",
    "recall (distracted)",
    "F1 (distracted)",
    "precision (driving)",
    "recall (driving)",
    "F1 (driving)"};

constexpr std::array<const char*, 7> kMetricColors = {
    "#4c72b0", "#dd8452", "#55a868", "#c44e52",
    "#8172b3", "#937860", "#da8bc3"};

std::string coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void append_metric_columns(std::string& out, const Metrics& m) {
  for (double Metrics::*field : kMetricFields) {
    out += ',';
    out += format_double(m.*field);
  }
  out += '\n';
}

}  // namespace

std::string report_csv(const EvalReport& report) {
  std::string out =
      "model,rep,seed,accuracy,precision_distracted,recall_distracted,"
      "f1_distracted,precision_driving,recall_driving,f1_driving\n";
  for (const EvalRow& row : report.rows) {
    out += row.model;
    out += ',';
    out += std::to_string(row.rep);
    out += ',';
    out += std::to_string(row.seed);
    append_metric_columns(out, row.metrics);
  }
  for (const EvalAggregate& agg : report.aggregates) {
    out += agg.model;
    out += ",mean,";
    append_metric_columns(out, agg.mean);
    out += agg.model;
    out += ",std,";
    append_metric_columns(out, agg.stddev);
  }
  return out;
}

std::string report_svg(const EvalReport& report) {
  if (report.aggregates.empty()) throw DataError("report: nothing to plot");

  constexpr double kBarWidth = 16.0;
  constexpr double kBarGap = 2.0;
  constexpr double kGroupGap = 36.0;
  constexpr double kMarginLeft = 62.0;
  constexpr double kMarginTop = 96.0;
  constexpr double kMarginBottom = 58.0;
  const double group_width =
      7.0 * kBarWidth + 6.0 * kBarGap;  // one bar per metric
  const std::size_t groups = report.aggregates.size();
  const double width = kMarginLeft + double(groups) * group_width +
                       double(groups) * kGroupGap + 24.0;
  const double height = kMarginTop + kSvgPlotHeight + kMarginBottom;
  const double base_y = kMarginTop + kSvgPlotHeight;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(width) +
         "\" height=\"" + coord(height) + "\" viewBox=\"0 0 " + coord(width) +
         " " + coord(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + coord(width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">Model comparison (mean \xC2\xB1 std over " +
         std::to_string(report.reps) + " repetitions)</text>\n";

  // Legend, two rows of four.
  for (std::size_t m = 0; m < kMetricLabels.size(); ++m) {
    const double lx = kMarginLeft + double(m % 4) * 165.0;
    const double ly = 40.0 + double(m / 4) * 20.0;
    svg += "<rect x=\"" + coord(lx) + "\" y=\"" + coord(ly) +
           "\" width=\"12\" height=\"12\" fill=\"" +
           std::string(kMetricColors[m]) + "\"/>\n";
    svg += "<text x=\"" + coord(lx + 17.0) + "\" y=\"" + coord(ly + 10.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" +
           kMetricLabels[m] + "</text>\n";
  }

  // Horizontal gridlines every 0.2 with axis labels.
  for (int g = 0; g <= 5; ++g) {
    const double v = double(g) / 5.0;
    const double y = base_y - v * kSvgPlotHeight;
    svg += "<line x1=\"" + coord(kMarginLeft - 4.0) + "\" y1=\"" + coord(y) +
           "\" x2=\"" + coord(width - 16.0) + "\" y2=\"" + coord(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    char label[8];
    std::snprintf(label, sizeof(label), "%.1f", v);
    svg += "<text x=\"" + coord(kMarginLeft - 8.0) + "\" y=\"" +
           coord(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           label + "</text>\n";
  }

  for (std::size_t gi = 0; gi < groups; ++gi) {
    const EvalAggregate& agg = report.aggregates[gi];
    const double gx = kMarginLeft + double(gi) * (group_width + kGroupGap) +
                      kGroupGap / 2.0;
    for (std::size_t m = 0; m < kMetricFields.size(); ++m) {
      const double mean = agg.mean.*kMetricFields[m];
      const double sd = agg.stddev.*kMetricFields[m];
      const double x = gx + double(m) * (kBarWidth + kBarGap);
      const double bar_h = mean * kSvgPlotHeight;
      svg += "<rect class=\"bar\" x=\"" + coord(x) + "\" y=\"" +
             coord(base_y - bar_h) + "\" width=\"" + coord(kBarWidth) +
             "\" height=\"" + coord(bar_h) + "\" fill=\"" +
             std::string(kMetricColors[m]) + "\"/>\n";
      const double lo = std::max(0.0, mean - sd);
      const double hi = std::min(1.0, mean + sd);
      const double cx = x + kBarWidth / 2.0;
      svg += "<line class=\"whisker\" x1=\"" + coord(cx) + "\" y1=\"" +
             coord(base_y - lo * kSvgPlotHeight) + "\" x2=\"" + coord(cx) +
             "\" y2=\"" + coord(base_y - hi * kSvgPlotHeight) +
             "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
      svg += "<line x1=\"" + coord(cx - 4.0) + "\" y1=\"" +
             coord(base_y - hi * kSvgPlotHeight) + "\" x2=\"" +
             coord(cx + 4.0) + "\" y2=\"" +
             coord(base_y - hi * kSvgPlotHeight) +
             "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
      svg += "<line x1=\"" + coord(cx - 4.0) + "\" y1=\"" +
             coord(base_y - lo * kSvgPlotHeight) + "\" x2=\"" +
             coord(cx + 4.0) + "\" y2=\"" +
             coord(base_y - lo * kSvgPlotHeight) +
             "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
    }
    svg += "<text x=\"" + coord(gx + group_width / 2.0) + "\" y=\"" +
           coord(base_y + 22.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">" +
           agg.model + "</text>\n";
  }

  svg += "<line x1=\"" + coord(kMarginLeft - 4.0) + "\" y1=\"" +
         coord(base_y) + "\" x2=\"" + coord(width - 16.0) + "\" y2=\"" +
         coord(base_y) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "</svg>\n";
  return svg;
}

void emit_report(const EvalReport& report, const std::string& csv_path,
                 const std::string& svg_path) {
  if (report.rows.empty()) throw DataError("report: no rows to emit");
  const std::string csv = report_csv(report);
  const std::string svg = report_svg(report);
  {
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    out.write(csv.data(), std::streamsize(csv.size()));
    if (!out) throw DataError("cannot write report: " + csv_path);
  }
  {
    std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
    out.write(svg.data(), std::streamsize(svg.size()));
    if (!out) throw DataError("cannot write report: " + svg_path);
  }
}

}  // namespace edd
