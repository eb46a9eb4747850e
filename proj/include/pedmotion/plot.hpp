#pragma once

#include <string>

#include "pedmotion/filterpipe.hpp"
#include "pedmotion/metrics.hpp"
#include "pedmotion/trajectory.hpp"

namespace pedmotion {

// Static SVG charts. Output depends only on the input values, so identical
// inputs produce identical files.

/// Grouped bars: one group per behavior class, one bar per tag (primary
/// counts).
std::string plot_tag_distribution(const TagDistribution& dist);

/// Mean displacement curve per class with a +-1 standard deviation band.
std::string plot_class_curves(const TrajectoryStats& stats);

/// Per-run collisions/km and FPBR bars.
std::string plot_report(const MetricsReport& report);

}  // namespace pedmotion
