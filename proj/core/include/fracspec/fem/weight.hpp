#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fracspec/conformal/composite.hpp"
#include "fracspec/types.hpp"

namespace fracspec::fem {

/// The transplantation weight |f'| on the base polygon. Singular points sit
/// on the boundary; `near` evaluates at point i plus a small offset without
/// forming the absolute coordinate.
class Weight {
 public:
  virtual ~Weight() = default;
  virtual bool is_unit() const { return false; }
  virtual double at(Point z) const = 0;
  virtual const std::vector<Point>& singular_points() const {
    static const std::vector<Point> none;
    return none;
  }
  virtual double near(std::size_t i, Complex dz) const { return at(singular_points()[i] + dz); }
};

class UnitWeight final : public Weight {
 public:
  bool is_unit() const override { return true; }
  double at(Point) const override { return 1.0; }
};

/// Arbitrary weight from a callable, with optional singular points.
class FunctionWeight final : public Weight {
 public:
  explicit FunctionWeight(std::function<double(Point)> f, std::vector<Point> singular = {})
      : f_(std::move(f)), singular_(std::move(singular)) {}
  double at(Point z) const override { return f_(z); }
  const std::vector<Point>& singular_points() const override { return singular_; }

 private:
  std::function<double(Point)> f_;
  std::vector<Point> singular_;
};

/// |f'| of a composite conformal map.
class MapWeight final : public Weight {
 public:
  explicit MapWeight(const conformal::CompositeMap& map);
  bool is_unit() const override { return map_.is_identity(); }
  double at(Point z) const override { return map_.derivative_abs(z); }
  const std::vector<Point>& singular_points() const override { return points_; }
  double near(std::size_t i, Complex dz) const override;

 private:
  const conformal::CompositeMap& map_;
  std::vector<Point> points_;
};

}  // namespace fracspec::fem
