// fracspec: eigenvalue enclosures on prefractal polygons.
//
// Every subcommand shares the run flags; a config file in CLI11's TOML-style
// key = value format can supply any of them and the command line wins.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "fracspec/conformal/composite.hpp"
#include "fracspec/error.hpp"
#include "fracspec/fem/assembly.hpp"
#include "fracspec/geometry/interpolants.hpp"
#include "fracspec/geometry/io.hpp"
#include "fracspec/geometry/koch.hpp"
#include "fracspec/geometry/lsystem.hpp"
#include "fracspec/pipeline/cache.hpp"
#include "fracspec/pipeline/report.hpp"
#include "fracspec/pipeline/run.hpp"
#include "fracspec/spectral/bessel.hpp"
#include "fracspec/spectral/oracle.hpp"

namespace fs = std::filesystem;
using namespace fracspec;
using pipeline::Side;

namespace {

struct Flags {
  std::string family = "koch";
  std::vector<int> levels{0};
  double delta = 0.0;
  int order = 5;
  std::vector<int> refinements{3};
  double b = 0.0;
  std::string out = "out";
  std::string cache = ".fracspec-cache";
  int jobs = 1;
  std::string input;
  int count = 100;
  unsigned seed = 1;
};

void add_run_flags(CLI::App& app, Flags& f) {
  app.add_option("--family", f.family, "koch, koch-T, koch-H, quadric or gosper");
  app.add_option("--levels", f.levels, "prefractal levels j")->delimiter(',');
  app.add_option("--delta", f.delta, "offset parameter of the quadric and Gosper interpolants");
  app.add_option("--order", f.order, "Lagrange order p in [1, 8]");
  app.add_option("--refinements", f.refinements, "uniform refinements, one value or one per level")->delimiter(',');
  app.add_option("--b", f.b, "upper end of the disk D(0, b); default 0.995 sqrt(j11^2)");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--cache", f.cache, "map cache directory; empty disables caching");
  app.add_option("--jobs", f.jobs, "worker threads");
}

pipeline::RunConfig to_config(const Flags& f, const CLI::App& app) {
  pipeline::RunConfig c;
  c.family = pipeline::parse_family(f.family);
  c.levels = f.levels;
  if (app.count("--delta") > 0) c.delta = f.delta;
  c.order = f.order;
  c.refinements = f.refinements;
  if (app.count("--b") > 0) c.b_override = f.b;
  c.output_dir = f.out;
  c.cache_dir = f.cache;
  c.jobs = f.jobs;
  pipeline::validate(c);
  return c;
}

std::vector<Side> sides_of(pipeline::Family family) {
  switch (family) {
    case pipeline::Family::kKochT: return {Side::kInner};
    case pipeline::Family::kKochH: return {Side::kOuter};
    default: return {Side::kInner, Side::kOuter};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* yes_no(bool b) { return b ? "pass" : "FAIL"; }

int cmd_geometry(const pipeline::RunConfig& c) {
  const fs::path dir = fs::path(c.output_dir) / "geometry";
  bool ok = true;
  if (pipeline::is_koch(c.family)) {
    for (int j : c.levels) {
      const geometry::InterpolationPair pair = geometry::koch_pair(j);
      pipeline::write_atomic((dir / ("T_" + std::to_string(j) + ".json")).string(),
                             geometry::polygon_to_json(pair.inner));
      pipeline::write_atomic((dir / ("H_" + std::to_string(j) + ".json")).string(),
                             geometry::polygon_to_json(pair.outer));
      const geometry::KochNestingReport r = geometry::verify_koch_nesting(pair, geometry::koch_pair(j + 1));
      std::printf("j=%d  T:%zu vertices  H:%zu vertices  nesting %s  collar(%.4g) %s  collar(%.4g) %s\n", j,
                  pair.inner.size(), pair.outer.size(), yes_no(r.inclusions_hold()), r.collar_width,
                  yes_no(r.collar_holds), r.nominal_collar_width, r.nominal_collar_holds ? "holds" : "does not hold");
      ok = ok && r.inclusions_hold() && r.collar_holds;
    }
  } else {
    require(c.delta.has_value(), ErrorKind::kConfig, "--delta is required for " + pipeline::family_name(c.family));
    const geometry::FractalFamily fam = geometry::family_by_name(pipeline::family_name(c.family));
    const geometry::HypothesisGReport report = geometry::verify_hypothesis_g(fam, *c.delta, c.levels);
    for (const auto& l : report.levels) {
      std::printf("j=%d  G1 %s  G2 %s  G3 %s  G4 %s  %s\n", l.level, yes_no(l.g1), yes_no(l.g2),
                  l.g3 ? yes_no(*l.g3) : "-", yes_no(l.g4), l.note.c_str());
      if (l.g1 && l.g2) {
        const geometry::InterpolationPair pair = geometry::family_pair(fam, l.level, *c.delta);
        pipeline::write_atomic((dir / ("T_" + std::to_string(l.level) + ".json")).string(),
                               geometry::polygon_to_json(pair.inner));
        pipeline::write_atomic((dir / ("H_" + std::to_string(l.level) + ".json")).string(),
                               geometry::polygon_to_json(pair.outer));
      }
    }
    ok = report.all_pass();
  }
  if (!ok) {
    std::fprintf(stderr, "hypothesis check failed\n");
    return exit_code(ErrorKind::kHypothesis);
  }
  return 0;
}

int cmd_map(const pipeline::RunConfig& c) {
  const pipeline::MapCache cache(c.cache_dir);
  const fs::path dir = fs::path(c.output_dir) / "maps";
  for (int j : c.levels)
    for (Side s : sides_of(c.family)) {
      const pipeline::SideGeometry g = pipeline::side_geometry(c.family, s, j);
      const std::string family = std::string("koch-") + pipeline::side_name(s);
      const conformal::PrevertexSolution sol = cache.get(family, j, g.target, g.symmetry);
      const double residual = pipeline::side_residual(sol);
      double min_gap = sol.gaps.front();
      for (double gap : sol.gaps) min_gap = std::min(min_gap, gap);
      pipeline::write_atomic((dir / (std::string(pipeline::side_name(s)) + "_" + std::to_string(j) + ".json")).string(),
                             conformal::map_to_json(sol));
      std::printf("%s_%d  %zu prevertices  side residual %.2e  smallest gap %.3e\n", pipeline::side_name(s), j,
                  sol.size(), residual, min_gap);
    }
  return 0;
}

int cmd_assemble(const pipeline::RunConfig& c) {
  const pipeline::MapCache cache(c.cache_dir);
  for (std::size_t i = 0; i < c.levels.size(); ++i)
    for (Side s : sides_of(c.family)) {
      const int j = c.levels[i];
      const pipeline::SideGeometry g = pipeline::side_geometry(c.family, s, j);
      const std::string family = std::string("koch-") + pipeline::side_name(s);
      const auto g0 = cache.get(family, 0, g.base, g.symmetry);
      const auto gj = j == 0 ? g0 : cache.get(family, j, g.target, g.symmetry);
      const conformal::CompositeMap map(g0, gj);
      const fem::MapWeight weight(map);
      const fem::TriangleMesh mesh = fem::uniform_mesh(g.shape, c.refinement_for(i));
      const fem::DofMap dofs(mesh, c.order);
      fem::AssemblyOptions options;
      options.jobs = c.jobs;
      const fem::QuadraticPencil p = fem::assemble_pencil(mesh, dofs, weight, options);
      const fs::path dir = fs::path(c.output_dir) / "pencils" / (std::string(pipeline::side_name(s)) + "_" +
                                                                  std::to_string(j));
      fs::create_directories(dir);
      fem::write_matrix_market(p.K, (dir / "K.mtx").string());
      fem::write_matrix_market(p.L, (dir / "L.mtx").string());
      fem::write_matrix_market(p.M, (dir / "M.mtx").string());
      std::printf("%s_%d  refinement %d  order %d  unknowns %zu (v: %zu)  nnz(K) %ld  -> %s\n", pipeline::side_name(s),
                  j, c.refinement_for(i), c.order, p.size(), p.v_count, static_cast<long>(p.K.nonZeros()),
                  dir.string().c_str());
    }
  return 0;
}

void print_results(const std::vector<pipeline::LevelResult>& results) {
  std::printf("%-4s %-3s %-4s %-22s %-22s %-10s\n", "side", "j", "ref", "omega^2 lower", "omega^2 upper", "width");
  for (const auto& r : results)
    for (const auto* s : {&r.inner, &r.outer}) {
      if (!*s) continue;
      const auto& e = (*s)->enclosure;
      std::printf("%-4s %-3d %-4d %-22.15g %-22.15g %-10.3e\n", pipeline::side_name((*s)->side), (*s)->level,
                  (*s)->refinement, e.sq_lower, e.sq_upper, e.sq_width());
      for (const auto& w : (*s)->warnings) std::fprintf(stderr, "warning: %s_%d: %s\n", pipeline::side_name((*s)->side),
                                                        (*s)->level, w.c_str());
    }
  for (const auto& r : results)
    if (!r.consistent()) std::fprintf(stderr, "warning: level %d: H lower bound exceeds T upper bound\n", r.level);
  const pipeline::FractalBounds fb = pipeline::fractal_bounds(results);
  if (fb.sq_lower && fb.sq_upper)
    std::printf("fractal: %.15g <= omega^2 <= %.15g\n", *fb.sq_lower, *fb.sq_upper);
}

int cmd_bounds(const pipeline::RunConfig& c) {
  const auto results = pipeline::run_pipeline(c);
  print_results(results);
  for (const auto& path : pipeline::emit_table(results, c.output_dir)) std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_table(const Flags& f) {
  const auto results = pipeline::results_from_json(read_file(f.input));
  print_results(results);
  for (const auto& path : pipeline::emit_table(results, f.out)) std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_rate_fit(const Flags& f) {
  const pipeline::RateFit fit = pipeline::rate_fit(pipeline::results_from_json(read_file(f.input)));
  for (std::size_t i = 0; i < fit.levels.size(); ++i) std::printf("r(%d) = %.10g\n", fit.levels[i], fit.gaps[i]);
  std::printf("C = %.10g  rho = %.10g  rms log residual = %.3e\n", fit.C, fit.rho, fit.residual);
  pipeline::write_atomic((fs::path(f.out) / "rate.svg").string(), pipeline::rate_svg(fit));
  return 0;
}

int cmd_oracle(const Flags& f) {
  std::mt19937_64 rng(f.seed);
  std::uniform_int_distribution<int> shape(1, 12);
  std::normal_distribution<double> entry;
  int failures = 0;
  double worst = 0.0;
  for (int t = 0; t < f.count; ++t) {
    Eigen::MatrixXd T(shape(rng), shape(rng));
    for (Eigen::Index i = 0; i < T.size(); ++i) T.data()[i] = entry(rng);
    // Every third matrix gets a rank deficiency so the kernel count matters.
    if (t % 3 == 0 && T.rows() > 1) T.row(T.rows() - 1) = T.row(0);
    const spectral::BlockOracleReport r = spectral::block_operator_oracle(T);
    worst = std::max(worst, r.pairing_error);
    if (!r.passed()) {
      ++failures;
      std::printf("matrix %d (%ldx%ld): pairing %s, zero multiplicity %zu vs %zu + %zu\n", t, static_cast<long>(T.rows()),
                  static_cast<long>(T.cols()), yes_no(r.pairing_ok), r.zero_multiplicity, r.kernel_dim, r.cokernel_dim);
    }
  }
  std::printf("block operator oracle: %d/%d passed, worst pairing error %.2e\n", f.count - failures, f.count, worst);
  const spectral::DiskConstants& d = spectral::disk_constants();
  std::printf("j01^2 = %.13f  j11^2 = %.13f\n", d.j01_sq, d.j11_sq);
  return failures == 0 ? 0 : exit_code(ErrorKind::kNumerical);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue enclosures for the Dirichlet Laplacian on prefractal polygons"};
  app.set_config("--config", "", "TOML-style file of key = value run settings");
  app.require_subcommand(1);
  Flags f;
  add_run_flags(app, f);
  app.fallthrough();

  auto* geometry = app.add_subcommand("geometry", "write the polygons and check the nesting hypotheses");
  auto* map = app.add_subcommand("map", "solve (or load) the disk maps");
  auto* assemble = app.add_subcommand("assemble", "assemble the pencils and write them as Matrix Market");
  auto* bounds = app.add_subcommand("bounds", "compute enclosures and write the tables");
  auto* table = app.add_subcommand("table", "rewrite the tables from a results file");
  table->add_option("--in", f.input, "results.json from a bounds run")->required();
  auto* rate = app.add_subcommand("rate-fit", "fit r(j) = C rho^j to a results file");
  rate->add_option("--in", f.input, "results.json from a bounds run")->required();
  auto* oracle = app.add_subcommand("oracle", "block operator and Bessel checks");
  oracle->add_option("--count", f.count, "random matrices");
  oracle->add_option("--seed", f.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::kConfig);
  }

  try {
    if (*table) return cmd_table(f);
    if (*rate) return cmd_rate_fit(f);
    if (*oracle) return cmd_oracle(f);
    const pipeline::RunConfig config = to_config(f, app);
    if (*geometry) return cmd_geometry(config);
    if (*map) return cmd_map(config);
    if (*assemble) return cmd_assemble(config);
    if (*bounds) return cmd_bounds(config);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(ErrorKind::kNumerical);
  }
  return 0;
}
