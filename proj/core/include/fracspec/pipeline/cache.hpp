#pragma once

#include <string>

#include "fracspec/conformal/schwarz_christoffel.hpp"
#include "fracspec/geometry/polygon.hpp"

namespace fracspec::pipeline {

/// Hex SHA-256 of a string.
std::string sha256_hex(const std::string& text);

/// Writes `text` to a temporary file next to `path` and renames it over
/// `path`, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& text);

/// On-disk store of solved disk maps, one JSON file per key. The key hashes
/// the family, level, solver settings and target vertices. Concurrent
/// processes serialize on an advisory lock per key. An empty directory
/// disables caching.
class MapCache {
 public:
  explicit MapCache(std::string directory);

  /// Loads the map for `target` or solves and stores it. A loaded map is
  /// used only if its side-length residuals, recomputed here, stay below
  /// ten times the solver tolerance; otherwise it is solved again.
  conformal::PrevertexSolution get(const std::string& family, int level, const geometry::Polygon& target, int symmetry,
                                   const conformal::SolverOptions& options = {}) const;

  std::string key(const std::string& family, int level, const geometry::Polygon& target, int symmetry,
                  const conformal::SolverOptions& options) const;
  const std::string& directory() const { return directory_; }

 private:
  std::string directory_;
};

/// Largest relative side-length residual of `sol` against its own vertices.
double side_residual(const conformal::PrevertexSolution& sol, int nodes = 24);

}  // namespace fracspec::pipeline
