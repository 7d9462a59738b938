#include "fracspec/pipeline/config.hpp"

#include <algorithm>

#include "fracspec/error.hpp"
#include "fracspec/fem/lagrange.hpp"
#include "fracspec/geometry/koch.hpp"

namespace fracspec::pipeline {

Family parse_family(const std::string& name) {
  if (name == "koch") return Family::kKoch;
  if (name == "koch-T") return Family::kKochT;
  if (name == "koch-H") return Family::kKochH;
  if (name == "quadric") return Family::kQuadric;
  if (name == "gosper") return Family::kGosper;
  fail(ErrorKind::kConfig, "unknown family '" + name + "' (expected koch, koch-T, koch-H, quadric or gosper)");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::kKoch: return "koch";
    case Family::kKochT: return "koch-T";
    case Family::kKochH: return "koch-H";
    case Family::kQuadric: return "quadric";
    case Family::kGosper: return "gosper";
  }
  return "unknown";
}

bool is_koch(Family family) {
  return family == Family::kKoch || family == Family::kKochT || family == Family::kKochH;
}

int RunConfig::refinement_for(std::size_t level_index) const {
  return refinements.size() == 1 ? refinements.front() : refinements.at(level_index);
}

void validate(RunConfig& config) {
  require(!config.levels.empty(), ErrorKind::kConfig, "levels: at least one level is required");
  if (config.refinements.size() > 1) {
    require(config.refinements.size() == config.levels.size(), ErrorKind::kConfig,
            "refinements: give one value or one per level");
    require(std::is_sorted(config.levels.begin(), config.levels.end()) &&
                std::adjacent_find(config.levels.begin(), config.levels.end()) == config.levels.end(),
            ErrorKind::kConfig, "levels: per-level refinements need strictly increasing levels");
  } else {
    std::sort(config.levels.begin(), config.levels.end());
    config.levels.erase(std::unique(config.levels.begin(), config.levels.end()), config.levels.end());
  }
  require(!config.refinements.empty(), ErrorKind::kConfig, "refinements: at least one value is required");
  for (int j : config.levels)
    require(j >= 0 && j <= geometry::kMaxKochLevel, ErrorKind::kConfig,
            "levels: " + std::to_string(j) + " is outside [0, " + std::to_string(geometry::kMaxKochLevel) + "]");
  for (int r : config.refinements)
    require(r >= 1 && r <= 8, ErrorKind::kConfig, "refinements: " + std::to_string(r) + " is outside [1, 8]");
  require(config.order >= 1 && config.order <= fem::kMaxOrder, ErrorKind::kConfig, "order: must be in [1, 8]");
  require(config.jobs >= 1, ErrorKind::kConfig, "jobs: must be at least 1");
  if (config.b_override) require(*config.b_override > 0.0, ErrorKind::kConfig, "b: must be positive");
  if (config.family == Family::kQuadric || config.family == Family::kGosper) {
    require(config.delta.has_value(), ErrorKind::kConfig, "delta: required for " + family_name(config.family));
    require(*config.delta > 0.0 && *config.delta < 1.0, ErrorKind::kConfig, "delta: must be in (0, 1)");
  }
}

}  // namespace fracspec::pipeline
