#pragma once

#include <span>
#include <string>
#include <vector>

#include "gfflab/brw.hpp"
#include "gfflab/extremes.hpp"

namespace gfflab {

struct ReportTolerances {
  /// SE multiplier for the monotonicity and Dekking-Host inequalities.
  double inequality_se = 2.0;
  /// SE multiplier for point-value checks.
  double point_se = 3.0;
  /// Threshold K of the subsequence detector.
  double detector_threshold = 2.0;
};

/// Level table plus monotonicity, tightness, detector and growth-fit tables.
/// Sections whose preconditions fail are reported as skipped.
std::string render_extremes_report(std::span<const MaxStats> stats, const ReportTolerances& tol);

std::string render_brw_report(const std::vector<BrwGeneration>& rows);

}  // namespace gfflab
