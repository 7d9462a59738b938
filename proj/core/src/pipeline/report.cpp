#include "fracspec/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "fracspec/error.hpp"

namespace fracspec::pipeline {
namespace {

using nlohmann::json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json side_to_json(const SideResult& s) {
  const spectral::Enclosure& e = s.enclosure;
  json row;
  row["domain"] = side_name(s.side);
  row["j"] = s.level;
  row["p"] = s.order;
  row["refinement"] = s.refinement;
  row["lambda"] = {e.lambda.real(), e.lambda.imag()};
  row["a"] = e.a;
  row["b"] = e.b;
  row["omega_lower"] = e.lower;
  row["omega_upper"] = e.upper;
  row["omega_sq_lower"] = e.sq_lower;
  row["omega_sq_upper"] = e.sq_upper;
  row["diagnostics"] = {{"unknowns", s.unknowns},   {"weight_samples", s.weight_samples},
                        {"shift", s.shift},         {"residual", s.residual},
                        {"map_residual", s.map_residual}, {"warnings", s.warnings}};
  return row;
}

SideResult side_from_json(const json& row) {
  SideResult s;
  const std::string domain = row.at("domain").get<std::string>();
  require(domain == "T" || domain == "H", ErrorKind::kIo, "results: domain must be T or H");
  s.side = domain == "T" ? Side::kInner : Side::kOuter;
  s.level = row.at("j").get<int>();
  s.order = row.at("p").get<int>();
  s.refinement = row.at("refinement").get<int>();
  spectral::Enclosure& e = s.enclosure;
  e.lambda = {row.at("lambda").at(0).get<double>(), row.at("lambda").at(1).get<double>()};
  e.a = row.at("a").get<double>();
  e.b = row.at("b").get<double>();
  e.lower = row.at("omega_lower").get<double>();
  e.upper = row.at("omega_upper").get<double>();
  e.sq_lower = row.at("omega_sq_lower").get<double>();
  e.sq_upper = row.at("omega_sq_upper").get<double>();
  if (row.contains("diagnostics")) {
    const json& d = row["diagnostics"];
    s.unknowns = d.value("unknowns", std::size_t{0});
    s.weight_samples = d.value("weight_samples", std::size_t{0});
    s.shift = d.value("shift", 0.0);
    s.residual = d.value("residual", 0.0);
    s.map_residual = d.value("map_residual", 0.0);
    s.warnings = d.value("warnings", std::vector<std::string>{});
  }
  return s;
}

}  // namespace

RateFit rate_fit(const std::vector<int>& levels, const std::vector<double>& gaps) {
  require(levels.size() == gaps.size(), ErrorKind::kPrecondition, "rate fit: one gap per level");
  require(levels.size() >= 3, ErrorKind::kPrecondition, "rate fit needs at least three levels");
  for (std::size_t i = 0; i < gaps.size(); ++i)
    require(gaps[i] > 0.0, ErrorKind::kNumerical,
            "rate fit: gap at level " + std::to_string(levels[i]) + " is not positive (" + fmt_sci(gaps[i]) + ")");
  const double n = static_cast<double>(levels.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double x = levels[i], y = std::log(gaps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  require(denom > 0.0, ErrorKind::kPrecondition, "rate fit needs distinct levels");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  RateFit fit;
  fit.C = std::exp(intercept);
  fit.rho = std::exp(slope);
  fit.levels = levels;
  fit.gaps = gaps;
  double ss = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double r = std::log(gaps[i]) - intercept - slope * levels[i];
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

RateFit rate_fit(const std::vector<LevelResult>& results) {
  std::vector<int> levels;
  std::vector<double> gaps;
  for (const LevelResult& r : results) {
    if (!r.inner || !r.outer) continue;
    levels.push_back(r.level);
    gaps.push_back(r.inner->enclosure.sq_mid() - r.outer->enclosure.sq_mid());
  }
  return rate_fit(levels, gaps);
}

std::string results_to_json(const std::vector<LevelResult>& results) {
  json rows = json::array();
  for (const LevelResult& r : results) {
    if (r.inner) rows.push_back(side_to_json(*r.inner));
    if (r.outer) rows.push_back(side_to_json(*r.outer));
  }
  json doc;
  doc["rows"] = rows;
  const FractalBounds fb = fractal_bounds(results);
  doc["fractal"] = {{"omega_sq_lower", fb.sq_lower ? json(*fb.sq_lower) : json()},
                    {"omega_sq_upper", fb.sq_upper ? json(*fb.sq_upper) : json()}};
  return doc.dump(2) + "\n";
}

std::vector<LevelResult> results_from_json(const std::string& text) {
  std::vector<LevelResult> out;
  try {
    const json doc = json::parse(text);
    for (const json& row : doc.at("rows")) {
      SideResult s = side_from_json(row);
      auto it = std::find_if(out.begin(), out.end(), [&](const LevelResult& r) { return r.level == s.level; });
      if (it == out.end()) {
        out.push_back({});
        it = std::prev(out.end());
        it->level = s.level;
        it->refinement = s.refinement;
      }
      auto& slot = s.side == Side::kInner ? it->inner : it->outer;
      require(!slot, ErrorKind::kIo, "results: duplicate row for level " + std::to_string(s.level));
      slot = std::move(s);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::kIo, std::string("results: ") + e.what());
  }
  std::sort(out.begin(), out.end(), [](const LevelResult& a, const LevelResult& b) { return a.level < b.level; });
  return out;
}

std::string side_csv(const std::vector<LevelResult>& results, Side side) {
  std::string out = "j,refinement,lower,upper\n";
  for (const LevelResult& r : results) {
    const auto& s = side == Side::kInner ? r.inner : r.outer;
    if (!s) continue;
    out += std::to_string(s->level) + "," + std::to_string(s->refinement) + "," + num(s->enclosure.sq_lower) + "," +
           num(s->enclosure.sq_upper) + "\n";
  }
  return out;
}

std::string rate_svg(const RateFit& fit) {
  require(!fit.levels.empty(), ErrorKind::kPrecondition, "nothing to plot");
  const double width = 480, height = 320, margin = 48;
  const double x0 = *std::min_element(fit.levels.begin(), fit.levels.end());
  double x1 = *std::max_element(fit.levels.begin(), fit.levels.end());
  if (x1 == x0) x1 = x0 + 1;
  double y0 = std::log10(*std::min_element(fit.gaps.begin(), fit.gaps.end()));
  double y1 = std::log10(*std::max_element(fit.gaps.begin(), fit.gaps.end()));
  y0 = std::floor(y0);
  y1 = std::max(std::ceil(y1), y0 + 1);
  auto px = [&](double j) { return margin + (j - x0) / (x1 - x0) * (width - 2 * margin); };
  auto py = [&](double r) { return height - margin - (std::log10(r) - y0) / (y1 - y0) * (height - 2 * margin); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
    << height - margin << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
    << "\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(y0); d <= static_cast<int>(y1); ++d)
    s << "<text x=\"4\" y=\"" << py(std::pow(10.0, d)) + 4 << "\" font-size=\"11\">1e" << d << "</text>\n";
  for (int j : fit.levels)
    s << "<text x=\"" << px(j) - 3 << "\" y=\"" << height - margin + 16 << "\" font-size=\"11\">" << j << "</text>\n";
  s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < fit.levels.size(); ++i) s << px(fit.levels[i]) << "," << py(fit.gaps[i]) << " ";
  s << "\"/>\n";
  if (fit.C > 0.0) {
    s << "<polyline fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\" points=\"" << px(x0) << ","
      << py(fit.C * std::pow(fit.rho, x0)) << " " << px(x1) << "," << py(fit.C * std::pow(fit.rho, x1)) << "\"/>\n";
  }
  for (std::size_t i = 0; i < fit.levels.size(); ++i)
    s << "<circle cx=\"" << px(fit.levels[i]) << "\" cy=\"" << py(fit.gaps[i]) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  s << "<text x=\"" << width / 2 - 60 << "\" y=\"20\" font-size=\"12\">r(j), C = " << num(fit.C).substr(0, 8)
    << ", rho = " << num(fit.rho).substr(0, 8) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string timings_json(const std::vector<LevelResult>& results) {
  json rows = json::array();
  for (const LevelResult& r : results)
    for (const auto* s : {&r.inner, &r.outer}) {
      if (!*s) continue;
      const StageTimes& t = (*s)->times;
      rows.push_back({{"domain", side_name((*s)->side)},
                      {"j", (*s)->level},
                      {"map", t.map},
                      {"assembly", t.assembly},
                      {"shift", t.shift},
                      {"solve", t.solve}});
    }
  return rows.dump(2) + "\n";
}

std::vector<std::string> emit_table(const std::vector<LevelResult>& results, const std::string& directory) {
  require(!results.empty(), ErrorKind::kPrecondition, "no results to write");
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const std::string path = (fs::path(directory) / name).string();
    write_atomic(path, text);
    written.push_back(path);
  };
  put("results.json", results_to_json(results));
  const bool any_inner = std::any_of(results.begin(), results.end(), [](const LevelResult& r) { return r.inner; });
  const bool any_outer = std::any_of(results.begin(), results.end(), [](const LevelResult& r) { return r.outer; });
  if (any_inner) put("bounds_T.csv", side_csv(results, Side::kInner));
  if (any_outer) put("bounds_H.csv", side_csv(results, Side::kOuter));
  put("timings.json", timings_json(results));
  long paired = 0;
  bool positive = true;
  for (const LevelResult& r : results) {
    if (!r.inner || !r.outer) continue;
    ++paired;
    positive = positive && r.inner->enclosure.sq_mid() > r.outer->enclosure.sq_mid();
  }
  if (paired >= 3 && positive) put("rate.svg", rate_svg(rate_fit(results)));
  return written;
}

}  // namespace fracspec::pipeline
