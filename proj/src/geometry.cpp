#include "roict/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace roict {

void FanBeamGeometry::validate() const {
  if (num_views < 1 || num_cells < 1) {
    throw std::invalid_argument("geometry: views and cells must be positive");
  }
  if (!(cell_pitch_mm > 0.0)) throw std::invalid_argument("geometry: cell pitch must be positive");
  if (!(sad_mm > 0.0) || !(sad_mm < sdd_mm)) {
    throw std::invalid_argument("geometry: need 0 < sad < sdd");
  }
  if (!std::isfinite(detector_offset_cells)) throw std::invalid_argument("geometry: bad offset");
  if (static_cast<Index>(view_angles.size()) != num_views) {
    throw std::invalid_argument("geometry: view angle count differs from num_views");
  }
  for (std::size_t k = 0; k < view_angles.size(); ++k) {
    const double a = view_angles[k];
    if (!(a >= 0.0) || !(a < 2.0 * std::numbers::pi)) {
      throw std::invalid_argument("geometry: view angles must lie in [0, 2pi)");
    }
    if (k > 0 && !(a > view_angles[k - 1])) {
      throw std::invalid_argument("geometry: view angles must be strictly increasing");
    }
  }
}

std::vector<double> uniform_angles(Index num_views, double start_rad) {
  std::vector<double> angles(static_cast<std::size_t>(num_views));
  const double two_pi = 2.0 * std::numbers::pi;
  double start = std::fmod(start_rad, two_pi);
  if (start < 0.0) start += two_pi;
  for (Index k = 0; k < num_views; ++k) {
    angles[static_cast<std::size_t>(k)] =
        start + two_pi * static_cast<double>(k) / static_cast<double>(num_views);
  }
  // Keep the sequence inside [0, 2π) and increasing by rotating a wrapped tail
  // to the front.
  std::vector<double> wrapped;
  std::vector<double> head;
  for (double a : angles) (a >= two_pi ? wrapped : head).push_back(a >= two_pi ? a - two_pi : a);
  wrapped.insert(wrapped.end(), head.begin(), head.end());
  return wrapped;
}

FanBeamGeometry make_geometry(Index num_views, Index num_cells, double pitch_mm,
                              double sdd_mm, double sad_mm, double offset_cells,
                              double start_angle_rad) {
  FanBeamGeometry g;
  g.num_views = num_views;
  g.num_cells = num_cells;
  g.cell_pitch_mm = pitch_mm;
  g.sdd_mm = sdd_mm;
  g.sad_mm = sad_mm;
  g.detector_offset_cells = offset_cells;
  if (num_views >= 1) g.view_angles = uniform_angles(num_views, start_angle_rad);
  g.validate();
  return g;
}

FanBeamGeometry paper_geometry() {
  return make_geometry(182, 130, 0.8, 291.20, 115.84, 1.5);
}

double fov_pixel_size(const FanBeamGeometry& g, Index n) {
  if (n < 1) throw std::invalid_argument("fov_pixel_size: n must be positive");
  return g.detector_width_mm() / g.magnification() / static_cast<double>(n);
}

double detector_coordinate(const FanBeamGeometry& g, double cell) {
  return (cell - 0.5 * static_cast<double>(g.num_cells - 1) - g.detector_offset_cells) *
         g.cell_pitch_mm;
}

Eigen::Vector2d source_position(const FanBeamGeometry& g, Index k) {
  const double theta = g.view_angles.at(static_cast<std::size_t>(k));
  return g.sad_mm * Eigen::Vector2d(std::cos(theta), std::sin(theta));
}

Eigen::Vector2d detector_position(const FanBeamGeometry& g, Index k, double u_mm) {
  const double theta = g.view_angles.at(static_cast<std::size_t>(k));
  const Eigen::Vector2d axis(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d e_u(-std::sin(theta), std::cos(theta));
  return (g.sad_mm - g.sdd_mm) * axis + u_mm * e_u;
}

Ray ray(const FanBeamGeometry& g, Index k, Index p) {
  if (k < 0 || k >= g.num_views || p < 0 || p >= g.num_cells) {
    throw std::invalid_argument("ray: view or cell index out of range");
  }
  return {source_position(g, k),
          detector_position(g, k, detector_coordinate(g, static_cast<double>(p)))};
}

double distance_to_line(const Ray& r, const Eigen::Vector2d& point) {
  const Eigen::Vector2d d = r.detector_point - r.source;
  const Eigen::Vector2d w = point - r.source;
  return std::abs(d.x() * w.y() - d.y() * w.x()) / d.norm();
}

FanBeamGeometry geometry_from_json(const std::string& json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    return make_geometry(j.at("views").get<Index>(), j.at("cells").get<Index>(),
                         j.at("pitch_mm").get<double>(), j.at("sdd_mm").get<double>(),
                         j.at("sad_mm").get<double>(), j.value("offset_cells", 0.0),
                         j.value("start_angle_rad", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("geometry json: ") + e.what());
  }
}

FanBeamGeometry load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open geometry file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return geometry_from_json(ss.str());
}

std::string geometry_to_json(const FanBeamGeometry& g) {
  nlohmann::json j{{"views", g.num_views},        {"cells", g.num_cells},
                   {"pitch_mm", g.cell_pitch_mm}, {"sdd_mm", g.sdd_mm},
                   {"sad_mm", g.sad_mm},          {"offset_cells", g.detector_offset_cells},
                   {"start_angle_rad", g.view_angles.empty() ? 0.0 : g.view_angles.front()}};
  return j.dump(2);
}

}  // namespace roict
