#pragma once

#include <string>

#include "fracspec/geometry/polygon.hpp"

namespace fracspec::geometry {

/// JSON object {vertices: [[x, y], ...], angle_fractions: [...], level,
/// side_length}; side_length is null when the sides differ.
std::string polygon_to_json(const Polygon& polygon);

/// Inverse of polygon_to_json. Angle fractions are recomputed from the
/// vertices; a mismatch with the stored ones beyond 1e-9 is an io error.
Polygon polygon_from_json(const std::string& text);

}  // namespace fracspec::geometry
