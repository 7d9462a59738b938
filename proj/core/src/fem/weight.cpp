#include "fracspec/fem/weight.hpp"

#include "fracspec/error.hpp"

namespace fracspec::fem {

MapWeight::MapWeight(const conformal::CompositeMap& map) : map_(map) {
  for (const auto& s : map.singular_points()) points_.push_back(s.z);
}

double MapWeight::near(std::size_t i, Complex dz) const {
  try {
    return map_.derivative_abs_near(i, dz);
  } catch (const Error&) {
    return map_.derivative_abs(points_[i] + dz);
  }
}

}  // namespace fracspec::fem
