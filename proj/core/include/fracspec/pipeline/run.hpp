#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/fem/mesh.hpp"
#include "fracspec/geometry/polygon.hpp"
#include "fracspec/pipeline/cache.hpp"
#include "fracspec/pipeline/config.hpp"
#include "fracspec/spectral/enclosure.hpp"

namespace fracspec::pipeline {

struct StageTimes {
  double map = 0.0, assembly = 0.0, shift = 0.0, solve = 0.0;
};

/// Enclosure for one polygon of one level.
struct SideResult {
  Side side = Side::kInner;
  int level = 0;
  int order = 0;
  int refinement = 0;
  spectral::Enclosure enclosure;
  // Diagnostics.
  std::size_t unknowns = 0;
  std::size_t weight_samples = 0;
  double shift = 0.0;           // omega from the scalar Galerkin problem
  double residual = 0.0;        // of the selected spectrum point
  double map_residual = 0.0;    // worst side-length residual of the two disk maps
  std::vector<std::string> warnings;
  StageTimes times;
};

struct LevelResult {
  int level = 0;
  int refinement = 0;
  std::optional<SideResult> inner;  // T_j
  std::optional<SideResult> outer;  // H_j
  /// H lower <= T upper when both sides ran.
  bool consistent() const;
};

/// Bounds for the fractal itself from the computed levels: the largest
/// outer-side lower bound and the smallest inner-side upper bound.
struct FractalBounds {
  std::optional<double> sq_lower;
  std::optional<double> sq_upper;
};

/// Level polygon and the base polygon its map is composed with.
struct SideGeometry {
  geometry::Polygon base;
  geometry::Polygon target;
  fem::BaseShape shape = fem::BaseShape::kTriangle;
  int symmetry = 3;
};

/// Koch pair geometry; quadric and Gosper runs are rejected as unsupported.
SideGeometry side_geometry(Family family, Side side, int level);

/// Upper end of the disk: the override if set, else 0.995 sqrt(j11^2),
/// except for T_0 whose first eigenvalue exceeds sqrt(j11^2); there
/// 0.995 times its exactly known second one is used.
double disk_end(const RunConfig& config, Side side, int level);

/// One enclosure: maps (through the cache), assembly, shift, shift-invert
/// solve and selection. `jobs` threads are used for the assembly.
SideResult solve_side(const RunConfig& config, const MapCache& cache, Side side, int level, int refinement, int jobs);

/// Runs every requested level and side on a pool of config.jobs workers.
/// Errors carry the level and side.
std::vector<LevelResult> run_pipeline(const RunConfig& config);

FractalBounds fractal_bounds(const std::vector<LevelResult>& results);

}  // namespace fracspec::pipeline
