#include "fracspec/conformal/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "binomial.hpp"
#include "fracspec/error.hpp"

namespace fracspec::conformal {

InverseMap::InverseMap(PrevertexSolution sol, InverseOptions options) : sol_(std::move(sol)), options_(options) {
  require(sol_.size() >= 3, ErrorKind::kPrecondition, "inverse map needs a solved polygon map");
  const int g = options_.seed_grid;
  seed_xi_.push_back(0.0);
  for (int i = 0; i < g; ++i) {
    const double r = (i + 0.5) / g;
    for (int k = 0; k < g; ++k) seed_xi_.push_back(std::polar(r, 2.0 * kPi * (k + 0.5 * (i % 2)) / g));
  }
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (Complex xi : seed_xi_) {
    const Point z = sc_evaluate(sol_, xi);
    seed_z_.push_back(z);
    x0 = std::min(x0, z.real());
    y0 = std::min(y0, z.imag());
    x1 = std::max(x1, z.real());
    y1 = std::max(y1, z.imag());
  }
  const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(seed_z_.size()) / 4.0)));
  cell_ = std::max(x1 - x0, y1 - y0) / cells * (1.0 + 1e-9);
  if (cell_ <= 0.0) cell_ = 1.0;
  box_lo_ = {x0, y0};
  cells_x_ = static_cast<int>((x1 - x0) / cell_) + 1;
  cells_y_ = static_cast<int>((y1 - y0) / cell_) + 1;
  buckets_.assign(static_cast<std::size_t>(cells_x_ * cells_y_), {});
  for (std::size_t i = 0; i < seed_z_.size(); ++i) {
    const int cx = std::clamp(static_cast<int>((seed_z_[i].real() - x0) / cell_), 0, cells_x_ - 1);
    const int cy = std::clamp(static_cast<int>((seed_z_[i].imag() - y0) / cell_), 0, cells_y_ - 1);
    buckets_[static_cast<std::size_t>(cy * cells_x_ + cx)].push_back(i);
  }
  double shortest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sol_.size(); ++k)
    shortest = std::min(shortest, std::abs(sol_.vertices[(k + 1) % sol_.size()] - sol_.vertices[k]));
  corner_radius_ = options_.corner_radius * shortest;
  double diameter = 0.0;
  for (const Point& a : sol_.vertices)
    for (const Point& b : sol_.vertices) diameter = std::max(diameter, std::abs(a - b));
  tolerance_ = options_.tolerance * diameter;
}

std::size_t InverseMap::nearest_seed(Point z) const {
  const int cx = std::clamp(static_cast<int>(std::floor((z.real() - box_lo_.real()) / cell_)), 0, cells_x_ - 1);
  const int cy = std::clamp(static_cast<int>(std::floor((z.imag() - box_lo_.imag()) / cell_)), 0, cells_y_ - 1);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(cells_x_, cells_y_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    for (int y = cy - ring; y <= cy + ring; ++y) {
      for (int x = cx - ring; x <= cx + ring; ++x) {
        if (std::max(std::abs(x - cx), std::abs(y - cy)) != ring) continue;
        if (x < 0 || y < 0 || x >= cells_x_ || y >= cells_y_) continue;
        for (std::size_t i : buckets_[static_cast<std::size_t>(y * cells_x_ + x)]) {
          const double d = std::abs(seed_z_[i] - z);
          if (d < best_d) {
            best_d = d;
            best = i;
          }
        }
      }
    }
    // Anything in a further ring is at least `ring * cell_` away.
    if (best_d < ring * cell_) break;
  }
  return best;
}

Complex InverseMap::residual(const DiskPoint& p, Point z) const {
  if (p.anchor < 0) return sol_.A + sol_.C * sc_segment_integral(sol_, 0.0, p.delta) - z;
  return sol_.vertices[static_cast<std::size_t>(p.anchor)] +
         sol_.C * sc_integral_from_prevertex(sol_, static_cast<std::size_t>(p.anchor), p.delta) - z;
}

DiskPoint InverseMap::operator()(Point z) const {
  const double tol = tolerance_;

  std::size_t corner = 0;
  double corner_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sol_.size(); ++k) {
    const double d = std::abs(z - sol_.vertices[k]);
    if (d < corner_d) {
      corner_d = d;
      corner = k;
    }
  }
  const std::size_t seed = nearest_seed(z);
  double best = std::numeric_limits<double>::infinity();

  if (corner_d == 0.0) return {static_cast<long>(corner), sol_.prevertex(corner), 0.0};

  if (corner_d < corner_radius_) {
    // Near a corner of angle alpha pi the map behaves like delta^alpha, so
    // Newton runs on w with delta = -xi_k w^(1/alpha), where z is almost
    // linear in w.
    const std::size_t s = sol_.sector_size();
    const double alpha = sol_.exponents[corner % s] + 1.0;
    const Complex xk = sol_.prevertex(corner);
    auto delta_of = [&](Complex w) { return -xk * std::pow(w, 1.0 / alpha); };
    auto in_sector = [&](Complex w) { return std::abs(std::arg(w)) < 0.5 * alpha * kPi; };
    DiskPoint p{static_cast<long>(corner), xk, 0.0};
    // Linear model z - w_k = c w calibrated at the seed.
    Complex t_seed = -(seed_xi_[seed] - xk) / xk;
    if (t_seed.real() <= 0.0 || std::abs(t_seed) == 0.0) t_seed = corner_radius_ / std::max(1.0, std::abs(sol_.C));
    Complex w_seed = std::pow(t_seed, alpha);
    p.delta = delta_of(w_seed);
    const Complex c = (residual(p, z) + z - sol_.vertices[corner]) / w_seed;
    Complex w = (z - sol_.vertices[corner]) / c;
    if (!in_sector(w)) w = std::abs(w);
    p.delta = delta_of(w);
    Complex r = residual(p, z);
    for (int it = 0; it < options_.max_iterations; ++it) {
      best = std::min(best, std::abs(r));
      if (std::abs(r) <= 1e-3 * tol) return p;
      const Complex dg = sol_.C * sc_integrand_near(sol_, corner, p.delta) * (-xk) / alpha * std::pow(w, 1.0 / alpha - 1.0);
      Complex step = -r / dg;
      bool moved = false;
      for (int h = 0; h < 40; ++h, step *= 0.5) {
        const Complex w_new = w + step;
        if (!in_sector(w_new)) continue;
        DiskPoint q = p;
        q.delta = delta_of(w_new);
        const Complex r_new = residual(q, z);
        if (std::abs(r_new) < std::abs(r)) {
          w = w_new;
          p = q;
          r = r_new;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    best = std::min(best, std::abs(r));
    if (best <= tol) return p;
    fail(ErrorKind::kNumerical, "inverse map near a corner did not converge; best residual " + fmt_sci(best));
  }

  DiskPoint p{-1, 0.0, seed_xi_[seed]};
  Complex r = residual(p, z);
  for (int it = 0; it < options_.max_iterations; ++it) {
    best = std::min(best, std::abs(r));
    if (std::abs(r) <= 1e-3 * tol) return p;
    Complex step = -r / sc_derivative(sol_, p.delta);
    bool moved = false;
    for (int h = 0; h < 40; ++h, step *= 0.5) {
      const Complex xi_new = p.delta + step;
      if (std::abs(xi_new) >= 1.0) continue;
      const DiskPoint q{-1, 0.0, xi_new};
      const Complex r_new = residual(q, z);
      if (std::abs(r_new) < std::abs(r)) {
        p = q;
        r = r_new;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  best = std::min(best, std::abs(r));
  if (best <= tol) return p;
  fail(ErrorKind::kNumerical, "inverse map did not converge; best residual " + fmt_sci(best));
}

DiskPoint inverse_disk_map(const InverseMap& inverse, Point z) {
  const geometry::Polygon polygon(inverse.solution().vertices);
  require(geometry::locate(polygon, z, polygon.tolerance()) != geometry::Location::kOutside,
          ErrorKind::kPrecondition, "inverse map needs a point of the closed polygon");
  return inverse(z);
}

CompositeMap::CompositeMap(PrevertexSolution g0, PrevertexSolution gj)
    : inverse_(std::move(g0)), gj_(std::move(gj)), base_polygon_(inverse_.solution().vertices) {
  const PrevertexSolution& b = inverse_.solution();
  require(b.symmetry == gj_.symmetry && b.symmetry >= 2, ErrorKind::kUnsupported,
          "composite map needs base and level maps with the same symmetry order");
  require(b.sector_size() == 1, ErrorKind::kUnsupported, "composite map needs a base polygon whose vertices are all fixed");
  require(std::abs(std::polar(1.0, b.theta0) - std::polar(1.0, gj_.theta0)) < 1e-14, ErrorKind::kPrecondition,
          "base and level maps must share their fixed prevertices");
  identity_ = b.vertices == gj_.vertices;
  log_scale_ = identity_ ? 0.0 : std::log(std::abs(gj_.C)) - std::log(std::abs(b.C));
  fixed_exponent_ = gj_.exponents[0] - b.exponents[0];

  const std::size_t s = gj_.sector_size();
  const int m = gj_.symmetry;
  double a = gj_.theta0;
  for (std::size_t r = 0; r < s; ++r) {
    level_powered_.push_back(std::polar(1.0, m * a));
    a += gj_.gaps[r];
  }

  const std::vector<Complex> pv = gj_.prevertices();
  for (std::size_t i = 0; i < gj_.size(); ++i) {
    if (i % s == 0 || gj_.exponents[i % s] == 0.0) continue;
    SingularPoint sp;
    sp.prevertex = i;
    sp.exponent = gj_.exponents[i % s];
    sp.z = sc_evaluate(b, pv[i]);
    sp.base_edge = i / s;
    const Point w0 = b.vertices[sp.base_edge], w1 = b.vertices[(sp.base_edge + 1) % b.size()];
    sp.t = std::clamp(std::abs(sp.z - w0) / std::abs(w1 - w0), 0.0, 1.0);
    singular_.push_back(sp);
  }
}

double CompositeMap::log_abs(Complex xi, long near_rep, Complex near_v) const {
  const int m = gj_.symmetry;
  Complex xi_m = 1.0;
  for (int i = 0; i < m; ++i) xi_m *= xi;
  auto factor = [&](std::size_t r) {
    if (static_cast<long>(r) == near_rep) return std::abs(near_v * detail::binomial_quotient(near_v, m));
    return std::abs(1.0 - xi_m / level_powered_[r]);
  };
  double sum = log_scale_;
  for (std::size_t r = 1; r < level_powered_.size(); ++r) {
    const double a = gj_.exponents[r];
    if (a != 0.0) sum += a * std::log(factor(r));
  }
  if (fixed_exponent_ != 0.0) sum += fixed_exponent_ * std::log(factor(0));
  return sum;
}

Point CompositeMap::evaluate(Point z) const {
  if (identity_) return z;
  return sc_evaluate(gj_, inverse_(z).xi());
}

double CompositeMap::derivative_abs(Point z) const {
  if (identity_) return 1.0;
  return derivative_abs(inverse_(z));
}

double CompositeMap::derivative_abs(const DiskPoint& p) const {
  if (identity_) return 1.0;
  if (p.anchor >= 0) return std::exp(log_abs(p.xi(), 0, p.delta / p.anchor_point));
  return std::exp(log_abs(p.xi(), -1, 0.0));
}

double CompositeMap::derivative_abs_near(std::size_t i, Complex dz) const {
  const SingularPoint& sp = singular_.at(i);
  const PrevertexSolution& b = inverse_.solution();
  // Near a base corner g0 is not smooth on the scale of dz and the local
  // Newton below stalls; the anchored inverse handles that case.
  double corner = std::numeric_limits<double>::infinity();
  for (const Point& v : base_polygon_.vertices()) corner = std::min(corner, std::abs(v - sp.z));
  if (std::abs(dz) > 0.5 * corner) return derivative_abs(sp.z + dz);
  const Complex xi_i = gj_.prevertex(sp.prevertex);
  // Solve g0(xi_i + delta) = sp.z + dz; g0 is smooth and nonzero near xi_i.
  Complex delta = dz / sc_derivative(b, xi_i);
  bool converged = dz == 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 30 && !converged; ++it) {
    const Complex r = b.C * sc_step_integral(b, xi_i, delta) - dz;
    const Complex step = r / sc_derivative(b, xi_i + delta);
    delta -= step;
    const double size = std::abs(step);
    // Steps that stop shrinking below 1e-11 are quadrature noise.
    converged = size <= 1e-14 * std::abs(delta) || (size <= 1e-11 * std::abs(delta) && size >= 0.5 * previous);
    previous = size;
  }
  require(converged && std::abs(xi_i + delta) < 1.0 + 1e-15, ErrorKind::kNumerical,
          "local inverse near a singular point did not converge");
  return std::exp(log_abs(xi_i + delta, static_cast<long>(sp.prevertex % gj_.sector_size()), delta / xi_i));
}

double composite_derivative_abs(const CompositeMap& map, Point z) {
  require(geometry::locate(map.base_polygon(), z, map.base_polygon().tolerance()) == geometry::Location::kInside,
          ErrorKind::kPrecondition, "composite derivative needs a point of the open base polygon");
  return map.derivative_abs(z);
}

SingularityReport singularity_exponents(const geometry::Polygon& base, const geometry::Polygon& target,
                                        const VertexMatching& matching) {
  SingularityReport out;
  for (std::size_t k = 0; k < target.size(); ++k)
    out.exponents.push_back({k, target.angle_fractions()[k], 1.0});
  for (const auto& [b, t] : matching) {
    require(b < base.size() && t < target.size(), ErrorKind::kPrecondition, "vertex matching index out of range");
    out.exponents[t].beta = base.angle_fractions()[b];
  }
  for (const auto& e : out.exponents) out.assumption_b = out.assumption_b && e.integrable();
  return out;
}

std::vector<EigenfunctionSingularity> transplanted_singularity_table(KochFamily family) {
  // A corner of angle alpha pi sent to a base angle beta pi: the eigenfunction
  // grows like r^(1/alpha) and the map like rho^(alpha/beta).
  if (family == KochFamily::kT)
    return {{"fixed corners", 1.0 / 3.0, 3.0}, {"free, alpha = 1/3", 1.0 / 3.0, 1.0}, {"free, alpha = 4/3", 4.0 / 3.0, 1.0}};
  return {{"fixed corners", 2.0 / 3.0, 1.5}, {"free, alpha = 2/3", 2.0 / 3.0, 1.0}, {"free, alpha = 5/3", 5.0 / 3.0, 1.0}};
}

}  // namespace fracspec::conformal
