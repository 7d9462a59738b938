#include "fracspec/conformal/schwarz_christoffel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "binomial.hpp"
#include "fracspec/error.hpp"
#include "fracspec/quadrature.hpp"
#include "json.hpp"

namespace fracspec::conformal {
namespace {

using detail::binomial_quotient;

constexpr double kLn2 = 0.69314718055994530942;

// Exponents take only a handful of distinct values, so factors are multiplied
// per exponent group and raised to the power once.
struct ExponentGroups {
  std::vector<double> values;
  std::vector<int> group_of;  // per sector representative

  explicit ExponentGroups(const std::vector<double>& exponents, std::size_t s) : group_of(s) {
    for (std::size_t j = 0; j < s; ++j) {
      auto it = std::find_if(values.begin(), values.end(),
                             [&](double v) { return std::abs(v - exponents[j]) < 1e-13; });
      if (it == values.end()) {
        values.push_back(exponents[j]);
        group_of[j] = static_cast<int>(values.size()) - 1;
      } else {
        group_of[j] = static_cast<int>(it - values.begin());
      }
    }
  }
};

// Running product of positive reals with an explicit binary exponent.
struct RealProduct {
  double mant = 1.0;
  long exp2 = 0;
  int count = 0;
  void mul(double x) {
    mant *= x;
    if (++count == 32) {
      int e;
      mant = std::frexp(mant, &e);
      exp2 += e;
      count = 0;
    }
  }
  double log() const { return std::log(mant) + static_cast<double>(exp2) * kLn2; }
};

// Running product of complex factors with nonnegative real part; tracks how
// often the partial product crosses the negative real axis so that the
// logarithm of the product equals the sum of principal logarithms.
struct ComplexProduct {
  Complex p = 1.0;
  long exp2 = 0;
  long wraps = 0;
  int count = 0;
  void mul(Complex z) {
    const Complex q = p * z;
    if (p.imag() >= 0.0 && q.imag() < 0.0 && q.real() < 0.0 && z.imag() > 0.0) ++wraps;
    else if (p.imag() < 0.0 && q.imag() >= 0.0 && q.real() < 0.0 && z.imag() < 0.0) --wraps;
    p = q;
    if (++count == 32) {
      int e;
      std::frexp(std::abs(p), &e);
      p *= std::ldexp(1.0, -e);
      exp2 += e;
      count = 0;
    }
  }
  Complex log() const {
    return {std::log(std::abs(p)) + static_cast<double>(exp2) * kLn2, std::arg(p) + 2.0 * kPi * static_cast<double>(wraps)};
  }
};

// Arc integral of prod_j |2 sin(m (theta - theta_j) / 2)|^{a_j} over one gap.
class ArcIntegrator {
 public:
  ArcIntegrator(const std::vector<double>& gaps, const std::vector<double>& exponents, int m, int nodes)
      : gaps_(gaps), exponents_(exponents), m_(m), nodes_(nodes), s_(gaps.size()), groups_(exponents, gaps.size()),
        forward_(s_), forward_next_(s_), backward_(s_) {}

  double side(std::size_t k) {
    prepare(k);
    const double delta = gaps_[k];
    const double left = gaps_[(k + s_ - 1) % s_], right = gaps_[(k + 1) % s_];
    struct Piece {
      double lo, hi;
      int depth;
    };
    std::vector<Piece> stack{{0.0, delta, 0}};
    double total = 0.0;
    while (!stack.empty()) {
      const Piece p = stack.back();
      stack.pop_back();
      const bool own_lo = p.lo == 0.0, own_hi = p.hi == delta;
      double dist = std::min(p.lo + left, (delta - p.hi) + right);
      if (!own_lo) dist = std::min(dist, p.lo);
      if (!own_hi) dist = std::min(dist, delta - p.hi);
      if (p.hi - p.lo > dist && p.depth < 200) {
        const double mid = 0.5 * (p.lo + p.hi);
        stack.push_back({p.lo, mid, p.depth + 1});
        stack.push_back({mid, p.hi, p.depth + 1});
        continue;
      }
      total += piece(k, p.lo, p.hi, own_lo, own_hi, delta);
    }
    return total;
  }

 private:
  void prepare(std::size_t k) {
    const double sector = 2.0 * kPi / m_;
    forward_[k] = 0.0;
    for (std::size_t i = 1; i < s_; ++i) {
      const std::size_t j = (k + i) % s_;
      forward_[j] = forward_[(j + s_ - 1) % s_] + gaps_[(j + s_ - 1) % s_];
    }
    const std::size_t k1 = (k + 1) % s_;
    forward_next_[k1] = 0.0;
    for (std::size_t i = 1; i < s_; ++i) {
      const std::size_t j = (k1 + i) % s_;
      forward_next_[j] = forward_next_[(j + s_ - 1) % s_] + gaps_[(j + s_ - 1) % s_];
    }
    backward_[k] = -sector;
    double acc = 0.0;
    for (std::size_t i = 1; i < s_; ++i) {
      const std::size_t j = (k + s_ - i) % s_;
      acc += gaps_[j];
      backward_[j] = -acc;
    }
  }

  double piece(std::size_t k, double lo, double hi, bool own_lo, bool own_hi, double delta) {
    const double a_lo = own_lo ? exponents_[k] : 0.0;
    const double a_hi = own_hi ? exponents_[(k + 1) % s_] : 0.0;
    const Rule1d& rule = gauss_jacobi(nodes_, a_hi, a_lo);
    const double half = 0.5 * (hi - lo);
    const std::size_t k1 = (k + 1) % s_;
    double sum = 0.0;
    std::vector<RealProduct> prod(groups_.values.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = rule.nodes[q];
      const double t = lo + half * (1.0 + x);
      const double u = (delta - hi) + half * (1.0 - x);
      std::fill(prod.begin(), prod.end(), RealProduct{});
      for (std::size_t j = 0; j < s_; ++j) {
        double d = t - forward_[j];
        const double d2 = -u - forward_next_[j];
        const double d3 = t - backward_[j];
        if (std::abs(d2) < std::abs(d)) d = d2;
        if (std::abs(d3) < std::abs(d)) d = d3;
        double value = std::abs(2.0 * std::sin(0.5 * m_ * d));
        if (own_lo && j == k) value /= t;
        if (own_hi && j == k1) value /= u;
        prod[groups_.group_of[j]].mul(value);
      }
      double log_f = 0.0;
      for (std::size_t g = 0; g < prod.size(); ++g) log_f += groups_.values[g] * prod[g].log();
      sum += rule.weights[q] * std::exp(log_f);
    }
    // Jacobi weights integrate (1-x)^a_hi (1+x)^a_lo; rescale to [lo, hi].
    return sum * std::pow(half, 1.0 + a_lo + a_hi);
  }

  const std::vector<double>& gaps_;
  const std::vector<double>& exponents_;
  int m_;
  int nodes_;
  std::size_t s_;
  ExponentGroups groups_;
  std::vector<double> forward_, forward_next_, backward_;
};

std::vector<double> sector_slice(const std::vector<double>& v, std::size_t s) {
  return std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(s));
}

}  // namespace

std::vector<double> PrevertexSolution::angles() const {
  std::vector<double> out(size());
  if (out.empty()) return out;
  out[0] = theta0;
  // Accumulate per sector from the rotated start so errors do not build up.
  const std::size_t s = sector_size();
  for (std::size_t k = 1; k < size(); ++k)
    out[k] = (k % s == 0) ? theta0 + 2.0 * kPi * static_cast<double>(k / s) / symmetry : out[k - 1] + gaps[k - 1];
  return out;
}

std::vector<Complex> PrevertexSolution::prevertices() const {
  std::vector<Complex> out;
  for (double a : angles()) out.push_back(std::polar(1.0, a));
  return out;
}

Complex PrevertexSolution::prevertex(std::size_t k) const {
  const std::size_t s = sector_size();
  double a = theta0 + 2.0 * kPi * static_cast<double>(k / s) / symmetry;
  for (std::size_t i = 0; i < k % s; ++i) a += gaps[i];
  return std::polar(1.0, a);
}

std::vector<FixedPrevertex> symmetric_fixed_prevertices(const geometry::Polygon& target, int m) {
  require(m >= 2, ErrorKind::kUnsupported, "the parameter solver needs a rotational symmetry of order >= 2");
  require(target.size() % static_cast<std::size_t>(m) == 0, ErrorKind::kPrecondition,
          "vertex count is not a multiple of the symmetry order");
  std::vector<FixedPrevertex> out;
  const std::size_t s = target.size() / m;
  for (int i = 0; i < m; ++i) {
    const Point w = target.vertices()[i * s];
    require(std::abs(w) > 0.0, ErrorKind::kPrecondition, "fixed vertex at the symmetry centre");
    out.push_back({i * s, w / std::abs(w)});
  }
  return out;
}

PrevertexSolution solve_parameter_problem(const geometry::Polygon& target, const std::vector<FixedPrevertex>& fixed,
                                          const SolverOptions& options) {
  const std::size_t n = target.size();
  const int m = static_cast<int>(fixed.size());
  require(m >= 2, ErrorKind::kUnsupported, "the parameter solver needs at least two symmetric fixed prevertices");
  require(n % static_cast<std::size_t>(m) == 0, ErrorKind::kPrecondition,
          "vertex count is not a multiple of the number of fixed prevertices");
  const std::size_t s = n / m;
  const Complex rotation = std::polar(1.0, 2.0 * kPi / m);
  const double tol = 1e-10 * target.diameter();
  for (int i = 0; i < m; ++i) {
    require(fixed[i].index == i * s, ErrorKind::kPrecondition, "fixed indices must be equally spaced from vertex 0");
    require(std::abs(std::abs(fixed[i].prevertex) - 1.0) < 1e-14, ErrorKind::kPrecondition,
            "fixed prevertices must lie on the unit circle");
    require(std::abs(fixed[i].prevertex - fixed[0].prevertex * std::pow(rotation, i)) < 1e-12,
            ErrorKind::kPrecondition, "fixed prevertices must be equally spaced");
  }
  for (std::size_t k = 0; k < n; ++k)
    require(std::abs(target.vertices()[k] * rotation - target.vertices()[(k + s) % n]) < tol,
            ErrorKind::kPrecondition, "target polygon lacks the rotational symmetry of the fixed prevertices");

  PrevertexSolution sol;
  sol.vertices = target.vertices();
  for (double a : target.angle_fractions()) sol.exponents.push_back(a - 1.0);
  sol.symmetry = m;
  sol.theta0 = std::arg(fixed[0].prevertex);
  for (const auto& f : fixed) sol.fixed_indices.push_back(f.index);

  const std::vector<double> exps = sector_slice(sol.exponents, s);
  std::vector<double> target_len(s);
  for (std::size_t k = 0; k < s; ++k) target_len[k] = target.edge_length(static_cast<std::ptrdiff_t>(k));
  const double target_sum = std::accumulate(target_len.begin(), target_len.end(), 0.0);

  const double sector = 2.0 * kPi / m;
  std::vector<double> gaps(s, sector / static_cast<double>(s));
  std::vector<double> len(s);
  ArcIntegrator arc(gaps, exps, m, options.nodes);
  double relax = options.relaxation;
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int it = 0;; ++it) {
    for (std::size_t k = 0; k < s; ++k) len[k] = arc.side(k);
    const double len_sum = std::accumulate(len.begin(), len.end(), 0.0);
    double residual = 0.0;
    for (std::size_t k = 0; k < s; ++k)
      residual = std::max(residual, std::abs(len[k] * target_sum / len_sum - target_len[k]) / target_len[k]);
    sol.residual_history.push_back(residual);
    sol.residual = residual;
    if (residual < options.tolerance) break;
    if (!std::isfinite(residual) || it + 1 >= options.max_iterations) {
      std::string history;
      const std::size_t from = sol.residual_history.size() > 5 ? sol.residual_history.size() - 5 : 0;
      for (std::size_t i = from; i < sol.residual_history.size(); ++i)
        history += " " + fmt_sci(sol.residual_history[i]);
      fail(ErrorKind::kNumerical, "parameter problem did not converge after " + std::to_string(it + 1) +
                                      " iterations; last residuals:" + history);
    }
    // Damp harder when the iteration stops making progress.
    if (residual < best) {
      best = residual;
      since_best = 0;
    } else if (++since_best > 20) {
      relax *= 0.7;
      since_best = 0;
    }
    double gap_sum = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      gaps[k] *= std::pow((target_len[k] / target_sum) / (len[k] / len_sum), relax);
      gap_sum += gaps[k];
    }
    for (double& g : gaps) g *= sector / gap_sum;
    const double smallest = *std::min_element(gaps.begin(), gaps.end());
    if (smallest < options.crowding_limit)
      fail(ErrorKind::kNumerical, "prevertex crowding: gap " + fmt_sci(smallest) + " below " +
                                      fmt_sci(options.crowding_limit));
  }

  sol.gaps.resize(n);
  for (std::size_t k = 0; k < n; ++k) sol.gaps[k] = gaps[k % s];
  sol.A = 0.0;
  sol.C = 1.0;
  const Complex to_vertex = sc_segment_integral(sol, 0.0, sol.prevertex(0), -1, 0, options.nodes);
  sol.C = (sol.vertices[0] - sol.A) / to_vertex;
  return sol;
}

std::vector<double> side_lengths(const PrevertexSolution& sol, int nodes) {
  const std::size_t s = sol.sector_size();
  const std::vector<double> gaps = sector_slice(sol.gaps, s), exps = sector_slice(sol.exponents, s);
  ArcIntegrator arc(gaps, exps, sol.symmetry, nodes);
  std::vector<double> out(sol.size());
  for (std::size_t k = 0; k < s; ++k) {
    const double l = std::abs(sol.C) * arc.side(k);
    for (int r = 0; r < sol.symmetry; ++r) out[k + r * s] = l;
  }
  return out;
}

namespace {

// Integrand with factor `own` (a prevertex index) replaced by its quotient by
// the real distance parameter: the factor there equals dist * (-e * Q(v)).
Complex integrand_impl(const PrevertexSolution& sol, const ExponentGroups& groups, const std::vector<Complex>& zm,
                       Complex zeta, long own1, Complex e1, double dist1, long own2, Complex e2, double dist2) {
  const int m = sol.symmetry;
  const std::size_t s = sol.sector_size();
  Complex zeta_m = 1.0;
  for (int i = 0; i < m; ++i) zeta_m *= zeta;
  std::vector<ComplexProduct> prod(groups.values.size());
  for (std::size_t j = 0; j < s; ++j) {
    Complex f;
    if (own1 >= 0 && static_cast<std::size_t>(own1) % s == j) {
      f = -e1 * binomial_quotient(e1 * dist1, m);
    } else if (own2 >= 0 && static_cast<std::size_t>(own2) % s == j) {
      f = -e2 * binomial_quotient(e2 * dist2, m);
    } else {
      f = 1.0 - zeta_m / zm[j];
    }
    prod[groups.group_of[j]].mul(f);
  }
  Complex log_f = 0.0;
  for (std::size_t g = 0; g < prod.size(); ++g) log_f += groups.values[g] * prod[g].log();
  return std::exp(log_f);
}

std::vector<Complex> powered_prevertices(const PrevertexSolution& sol) {
  const std::size_t s = sol.sector_size();
  std::vector<Complex> zm(s);
  double a = sol.theta0;
  for (std::size_t j = 0; j < s; ++j) {
    zm[j] = std::polar(1.0, sol.symmetry * a);
    a += sol.gaps[j];
  }
  return zm;
}

}  // namespace

Complex sc_integrand(const PrevertexSolution& sol, Complex zeta) {
  const ExponentGroups groups(sol.exponents, sol.sector_size());
  return integrand_impl(sol, groups, powered_prevertices(sol), zeta, -1, 0.0, 0.0, -1, 0.0, 0.0);
}

Complex sc_integrand_near(const PrevertexSolution& sol, std::size_t k, Complex d) {
  const double dist = std::abs(d);
  if (dist == 0.0) return sc_integrand(sol, sol.prevertex(k));
  const ExponentGroups groups(sol.exponents, sol.sector_size());
  const Complex xk = sol.prevertex(k);
  const Complex e = (d / dist) / xk;
  return std::pow(dist, sol.exponents[k % sol.sector_size()]) *
         integrand_impl(sol, groups, powered_prevertices(sol), xk + d, static_cast<long>(k), e, dist, -1, 0.0, 0.0);
}

double sc_derivative_abs_near(const PrevertexSolution& sol, std::size_t k, Complex v) {
  const std::size_t s = sol.sector_size();
  const int m = sol.symmetry;
  const std::vector<Complex> zm = powered_prevertices(sol);
  const Complex zeta = sol.prevertex(k) * (1.0 + v);
  Complex zeta_m = 1.0;
  for (int i = 0; i < m; ++i) zeta_m *= zeta;
  double log_abs = std::log(std::abs(sol.C));
  for (std::size_t j = 0; j < s; ++j) {
    const double a = sol.exponents[j];
    if (a == 0.0) continue;
    const double f = (j == k % s) ? std::abs(v * binomial_quotient(v, m)) : std::abs(1.0 - zeta_m / zm[j]);
    log_abs += a * std::log(f);
  }
  return std::exp(log_abs);
}

namespace {

// Integral along a + s * dir, s in [0, 1]. Taking the direction itself keeps
// short steps away from a prevertex exact.
Complex segment_integral(const PrevertexSolution& sol, Complex a, Complex dir, long a_prevertex, long b_prevertex,
                         int nodes) {
  if (dir == 0.0) return 0.0;
  const Complex b = a + dir;
  const ExponentGroups groups(sol.exponents, sol.sector_size());
  const std::vector<Complex> zm = powered_prevertices(sol);
  const std::vector<Complex> pv = sol.prevertices();
  const std::size_t s = sol.sector_size();
  const double length = std::abs(dir);

  // Distance from the sub-segment [s0, s1] to the nearest prevertex that is
  // not an endpoint singularity of that piece.
  auto clearance = [&](double s0, double s1) {
    const Complex p = a + s0 * dir, q = a + s1 * dir;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pv.size(); ++k) {
      if (s0 == 0.0 && static_cast<long>(k) == a_prevertex) continue;
      if (s1 == 1.0 && static_cast<long>(k) == b_prevertex) continue;
      d = std::min(d, geometry::distance_to_segment(pv[k], p, q));
    }
    return d;
  };

  struct Piece {
    double s0, s1;
    int depth;
  };
  std::vector<Piece> stack{{0.0, 1.0, 0}};
  Complex total = 0.0;
  while (!stack.empty()) {
    const Piece piece = stack.back();
    stack.pop_back();
    const double piece_len = (piece.s1 - piece.s0) * length;
    if (piece_len > clearance(piece.s0, piece.s1) && piece.depth < 200) {
      const double mid = 0.5 * (piece.s0 + piece.s1);
      stack.push_back({piece.s0, mid, piece.depth + 1});
      stack.push_back({mid, piece.s1, piece.depth + 1});
      continue;
    }
    const bool own_lo = piece.s0 == 0.0 && a_prevertex >= 0;
    const bool own_hi = piece.s1 == 1.0 && b_prevertex >= 0;
    const double a_lo = own_lo ? sol.exponents[static_cast<std::size_t>(a_prevertex) % s] : 0.0;
    const double a_hi = own_hi ? sol.exponents[static_cast<std::size_t>(b_prevertex) % s] : 0.0;
    const Rule1d& rule = gauss_jacobi(nodes, a_hi, a_lo);
    const double half = 0.5 * (piece.s1 - piece.s0);
    // Unit step from each endpoint prevertex, relative to that prevertex.
    const Complex e_lo = own_lo ? (dir / length) / pv[static_cast<std::size_t>(a_prevertex)] : 0.0;
    const Complex e_hi = own_hi ? (-dir / length) / pv[static_cast<std::size_t>(b_prevertex)] : 0.0;
    Complex sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = rule.nodes[q];
      const double from_lo = (piece.s0 + half * (1.0 + x)) * length;
      const double from_hi = ((1.0 - piece.s1) + half * (1.0 - x)) * length;
      const Complex zeta = (from_lo <= from_hi) ? a + from_lo * (dir / length) : b - from_hi * (dir / length);
      sum += rule.weights[q] * integrand_impl(sol, groups, zm, zeta, own_lo ? a_prevertex : -1, e_lo, from_lo,
                                              own_hi ? b_prevertex : -1, e_hi, from_hi);
    }
    const double scale = half * length;
    total += sum * std::pow(scale, a_lo + a_hi) * (dir / length) * scale;
  }
  return total;
}

}  // namespace

Complex sc_segment_integral(const PrevertexSolution& sol, Complex a, Complex b, long a_prevertex, long b_prevertex,
                            int nodes) {
  return segment_integral(sol, a, b - a, a_prevertex, b_prevertex, nodes);
}

Complex sc_step_integral(const PrevertexSolution& sol, Complex a, Complex d, int nodes) {
  return segment_integral(sol, a, d, -1, -1, nodes);
}

Complex sc_integral_from_prevertex(const PrevertexSolution& sol, std::size_t k, Complex d, int nodes) {
  return segment_integral(sol, sol.prevertex(k), d, static_cast<long>(k), -1, nodes);
}

Point sc_evaluate(const PrevertexSolution& sol, Complex xi) {
  require(std::abs(xi) <= 1.0 + 1e-14, ErrorKind::kPrecondition, "sc_evaluate needs a point of the closed unit disk");
  const std::vector<Complex> pv = sol.prevertices();
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pv.size(); ++k) {
    const double d = std::abs(xi - pv[k]);
    if (d < best) {
      best = d;
      nearest = k;
    }
  }
  if (best == 0.0) return sol.vertices[nearest];
  if (std::abs(xi) <= best) return sol.A + sol.C * sc_segment_integral(sol, 0.0, xi);
  return sol.vertices[nearest] + sol.C * sc_segment_integral(sol, pv[nearest], xi, static_cast<long>(nearest), -1);
}

std::string map_to_json(const PrevertexSolution& sol) {
  nlohmann::json j;
  j["prevertices"] = sol.angles();
  j["gaps"] = sol.gaps;
  j["exponents"] = sol.exponents;
  auto& v = j["vertices"] = nlohmann::json::array();
  for (const Point& p : sol.vertices) v.push_back({p.real(), p.imag()});
  j["C"] = {sol.C.real(), sol.C.imag()};
  j["A"] = {sol.A.real(), sol.A.imag()};
  j["fixed_indices"] = sol.fixed_indices;
  j["symmetry"] = sol.symmetry;
  j["residual"] = sol.residual;
  j["normalization"] = "fixed prevertices at the arguments of their vertices; centre maps to A";
  return j.dump();
}

PrevertexSolution map_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    PrevertexSolution sol;
    const auto angles = j.at("prevertices").get<std::vector<double>>();
    sol.gaps = j.at("gaps").get<std::vector<double>>();
    sol.exponents = j.at("exponents").get<std::vector<double>>();
    for (const auto& p : j.at("vertices")) sol.vertices.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    sol.C = {j.at("C").at(0).get<double>(), j.at("C").at(1).get<double>()};
    sol.A = {j.at("A").at(0).get<double>(), j.at("A").at(1).get<double>()};
    sol.fixed_indices = j.at("fixed_indices").get<std::vector<std::size_t>>();
    sol.symmetry = j.at("symmetry").get<int>();
    sol.residual = j.at("residual").get<double>();
    require(!angles.empty() && angles.size() == sol.vertices.size() && sol.gaps.size() == angles.size() &&
                sol.exponents.size() == angles.size() && sol.symmetry >= 1 &&
                angles.size() % static_cast<std::size_t>(sol.symmetry) == 0,
            ErrorKind::kIo, "inconsistent map JSON sizes");
    sol.theta0 = angles[0];
    return sol;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kIo, std::string("malformed map JSON: ") + e.what());
  }
}

}  // namespace fracspec::conformal
