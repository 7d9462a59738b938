#pragma once

#include <string>
#include <vector>

#include "fracspec/pipeline/run.hpp"

namespace fracspec::pipeline {

/// r(j) ~ C rho^j by least squares on log r.
struct RateFit {
  double C = 0.0;
  double rho = 0.0;
  double residual = 0.0;  // root mean square of the log residuals
  std::vector<int> levels;
  std::vector<double> gaps;
};

/// Needs at least three levels and positive gaps.
RateFit rate_fit(const std::vector<int>& levels, const std::vector<double>& gaps);

/// Gaps between the inner and outer midpoints of the levels that have both.
RateFit rate_fit(const std::vector<LevelResult>& results);

/// One row per side and level: {domain, j, p, refinement, lambda: [re, im],
/// a, b, omega_lower, omega_upper, omega_sq_lower, omega_sq_upper} plus a
/// diagnostics object. Timings are left out so that reruns compare equal.
std::string results_to_json(const std::vector<LevelResult>& results);
std::vector<LevelResult> results_from_json(const std::string& text);

/// j,refinement,lower,upper for one side, squared bounds, 17 digits.
std::string side_csv(const std::vector<LevelResult>& results, Side side);

/// Semilog plot of r(j) with the fitted line.
std::string rate_svg(const RateFit& fit);

/// Per-stage timings, one object per side and level.
std::string timings_json(const std::vector<LevelResult>& results);

/// Writes results.json, bounds_T.csv and/or bounds_H.csv, timings.json and,
/// when at least three levels have both sides, rate.svg into `directory`.
/// All writes are atomic. Returns the paths written.
std::vector<std::string> emit_table(const std::vector<LevelResult>& results, const std::string& directory);

}  // namespace fracspec::pipeline
