#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fracspec::pipeline {

/// koch runs both sides of the Koch pair; koch-T and koch-H one side each.
enum class Family { kKoch, kKochT, kKochH, kQuadric, kGosper };

Family parse_family(const std::string& name);
std::string family_name(Family family);
bool is_koch(Family family);

/// Inner polygon T_j or outer polygon H_j.
enum class Side { kInner, kOuter };

inline const char* side_name(Side side) { return side == Side::kInner ? "T" : "H"; }

struct RunConfig {
  Family family = Family::kKoch;
  std::vector<int> levels{0};
  std::optional<double> delta;  // offset parameter of the quadric and Gosper interpolants
  int order = 5;
  /// One entry for all levels, or one per level.
  std::vector<int> refinements{3};
  std::optional<double> b_override;
  std::string output_dir = "out";
  std::string cache_dir = ".fracspec-cache";
  int jobs = 1;

  int refinement_for(std::size_t level_index) const;
};

/// Sorts and deduplicates the levels, then checks ranges. Throws a config
/// error naming the offending field.
void validate(RunConfig& config);

}  // namespace fracspec::pipeline
