#include "fracspec/pipeline/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "fracspec/conformal/composite.hpp"
#include "fracspec/error.hpp"
#include "fracspec/fem/assembly.hpp"
#include "fracspec/fem/dofmap.hpp"
#include "fracspec/fem/weight.hpp"
#include "fracspec/geometry/koch.hpp"
#include "fracspec/spectral/qep.hpp"

namespace fracspec::pipeline {

bool LevelResult::consistent() const {
  if (!inner || !outer) return true;
  return outer->enclosure.sq_lower <= inner->enclosure.sq_upper;
}

SideGeometry side_geometry(Family family, Side side, int level) {
  require(is_koch(family), ErrorKind::kUnsupported,
          "eigenvalue bounds are implemented for the Koch pair only; use the geometry stage for " +
              family_name(family));
  SideGeometry g;
  if (side == Side::kInner) {
    g.base = geometry::koch_inner(0);
    g.target = geometry::koch_inner(level);
    g.shape = fem::BaseShape::kTriangle;
    g.symmetry = 3;
  } else {
    g.base = geometry::koch_outer(0);
    g.target = geometry::koch_outer(level);
    g.shape = fem::BaseShape::kHexagon;
    g.symmetry = 6;
  }
  return g;
}

double disk_end(const RunConfig& config, Side side, int level) {
  if (config.b_override) return *config.b_override;
  if (side == Side::kInner && level == 0) {
    // Equilateral triangle of side sqrt(3): omega_2^2 = 112 pi^2 / 27.
    return 0.995 * std::sqrt(112.0 * kPi * kPi / 27.0);
  }
  return spectral::default_disk_end();
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

SideResult solve_side(const RunConfig& config, const MapCache& cache, Side side, int level, int refinement, int jobs) {
  SideResult r;
  r.side = side;
  r.level = level;
  r.order = config.order;
  r.refinement = refinement;

  auto t = std::chrono::steady_clock::now();
  const SideGeometry geo = side_geometry(config.family, side, level);
  const std::string family = std::string("koch-") + side_name(side);
  const conformal::PrevertexSolution g0 = cache.get(family, 0, geo.base, geo.symmetry);
  const conformal::PrevertexSolution gj = level == 0 ? g0 : cache.get(family, level, geo.target, geo.symmetry);
  r.map_residual = std::max(g0.residual, gj.residual);
  const conformal::CompositeMap map(g0, gj);
  const fem::MapWeight weight(map);
  r.times.map = seconds_since(t);

  t = std::chrono::steady_clock::now();
  const fem::TriangleMesh mesh = fem::uniform_mesh(geo.shape, refinement);
  const fem::DofMap dofs(mesh, config.order);
  fem::AssemblyOptions options;
  options.jobs = jobs;
  fem::QuadraticPencil pencil = fem::assemble_pencil(mesh, dofs, weight, options);
  pencil.level = level;
  r.unknowns = pencil.size();
  r.weight_samples = pencil.weight_samples;
  r.times.assembly = seconds_since(t);

  t = std::chrono::steady_clock::now();
  r.shift = spectral::ground_shift(pencil);
  r.times.shift = seconds_since(t);

  t = std::chrono::steady_clock::now();
  const spectral::SecondOrderSpectrum spectrum = spectral::solve_qep_near(pencil, r.shift);
  const double b = disk_end(config, side, level);
  const spectral::GroundSelection pick = spectral::select_ground_point(spectrum, 0.0, b);
  r.enclosure = spectral::enclosure_from_point(pick.lambda, 0.0, b);
  r.warnings = pick.warnings;
  for (const auto& p : spectrum.points)
    if (std::abs(p.lambda.real() - pick.lambda.real()) <= 1e-12 * pick.lambda.real() &&
        std::abs(std::abs(p.lambda.imag()) - pick.lambda.imag()) <= 1e-12 * pick.lambda.real())
      r.residual = std::max(r.residual, p.residual);
  r.times.solve = seconds_since(t);
  return r;
}

std::vector<LevelResult> run_pipeline(const RunConfig& input) {
  RunConfig config = input;
  validate(config);
  for (int j : config.levels) side_geometry(config.family, Side::kInner, j);

  std::vector<Side> sides;
  if (config.family != Family::kKochH) sides.push_back(Side::kInner);
  if (config.family != Family::kKochT) sides.push_back(Side::kOuter);

  struct Task {
    std::size_t level_index;
    Side side;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < config.levels.size(); ++i)
    for (Side s : sides) tasks.push_back({i, s});

  const MapCache cache(config.cache_dir);
  const int workers = std::max(1, std::min(config.jobs, static_cast<int>(tasks.size())));
  const int assembly_jobs = std::max(1, config.jobs / workers);
  std::vector<std::optional<SideResult>> done(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      const int level = config.levels[task.level_index];
      try {
        done[i] = solve_side(config, cache, task.side, level, config.refinement_for(task.level_index), assembly_jobs);
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(
            Error(e.kind(), "level " + std::to_string(level) + ", side " + side_name(task.side) + ": " + e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<LevelResult> results(config.levels.size());
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    results[i].level = config.levels[i];
    results[i].refinement = config.refinement_for(i);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    LevelResult& lr = results[tasks[i].level_index];
    (tasks[i].side == Side::kInner ? lr.inner : lr.outer) = std::move(done[i]);
  }
  return results;
}

FractalBounds fractal_bounds(const std::vector<LevelResult>& results) {
  FractalBounds b;
  for (const LevelResult& r : results) {
    if (r.outer) b.sq_lower = std::max(b.sq_lower.value_or(0.0), r.outer->enclosure.sq_lower);
    if (r.inner)
      b.sq_upper = std::min(b.sq_upper.value_or(r.inner->enclosure.sq_upper), r.inner->enclosure.sq_upper);
  }
  return b;
}

}  // namespace fracspec::pipeline
