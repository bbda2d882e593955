#pragma once

// Confidence-graph rendering: the density of a confidence distribution with
// one hypothesis region shaded and labeled with its confidence level.

#include <string>

#include "conflev/model.hpp"

namespace conflev {

enum class PlotFormat { SVG, ASCII };

// Density curve over center ± 4·scale. The percent label comes straight from
// confidence_level — the renderer does no probability arithmetic of its own.
// SVG output is standalone XML 1.1; ASCII output never exceeds 80 columns.
std::string render_confidence_plot(const ConfidenceDistribution& cd, const Hypothesis& shaded,
                                   PlotFormat format);

}  // namespace conflev
