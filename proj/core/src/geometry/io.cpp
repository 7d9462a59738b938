#include "fracspec/geometry/io.hpp"

#include <cmath>

#include "fracspec/error.hpp"
#include "json.hpp"

namespace fracspec::geometry {

std::string polygon_to_json(const Polygon& polygon) {
  nlohmann::json j;
  auto& vertices = j["vertices"] = nlohmann::json::array();
  for (const Point& p : polygon.vertices()) vertices.push_back({p.real(), p.imag()});
  j["angle_fractions"] = polygon.angle_fractions();
  j["level"] = polygon.level();
  j["side_length"] = polygon.side_length() ? nlohmann::json(*polygon.side_length()) : nlohmann::json(nullptr);
  return j.dump();
}

Polygon polygon_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Point> v;
    for (const auto& p : j.at("vertices")) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    Polygon polygon(std::move(v), j.value("level", 0));
    if (j.contains("angle_fractions")) {
      const auto stored = j["angle_fractions"].get<std::vector<double>>();
      require(stored.size() == polygon.size(), ErrorKind::kIo, "angle_fractions length does not match vertices");
      for (std::size_t k = 0; k < stored.size(); ++k)
        require(std::abs(stored[k] - polygon.angle_fractions()[k]) < 1e-9, ErrorKind::kIo,
                "stored angle fraction disagrees with the vertices at index " + std::to_string(k));
    }
    return polygon;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kIo, std::string("malformed polygon JSON: ") + e.what());
  }
}

}  // namespace fracspec::geometry
