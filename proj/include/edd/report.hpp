#pragma once

#include <string>

#include "edd/experiment.hpp"

namespace edd {

// Plot geometry, exposed so tests can compute expected bar coordinates.
inline constexpr double kSvgPlotHeight = 300.0;

// Data rows (model-major, repetitions ascending) followed by an aggregate
// block with rep values `mean` and `std` (seed column empty).
std::string report_csv(const EvalReport& report);

// Self-contained grouped bar chart: one group per model, one bar per metric
// mean with a +/- one-standard-deviation whisker.
std::string report_svg(const EvalReport& report);

void emit_report(const EvalReport& report, const std::string& csv_path,
                 const std::string& svg_path);

}  // namespace edd
