#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "roict/types.hpp"

namespace roict {

/// 2D fan-beam acquisition with a flat detector.
///
/// The source for view k sits at sad·(cos θ_k, sin θ_k). The detector line
/// is perpendicular to the source–isocenter axis at distance sdd from the
/// source, with unit direction e_u = (−sin θ_k, cos θ_k). Cell p is centred
/// at u_p = (p − (P−1)/2 − detector_offset)·cell_pitch.
struct FanBeamGeometry {
  Index num_views = 0;
  Index num_cells = 0;
  double cell_pitch_mm = 0.0;
  double sdd_mm = 0.0;
  double sad_mm = 0.0;
  double detector_offset_cells = 0.0;
  std::vector<double> view_angles;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  double magnification() const { return sdd_mm / sad_mm; }
  double detector_width_mm() const {
    return static_cast<double>(num_cells) * cell_pitch_mm;
  }
};

struct Ray {
  Eigen::Vector2d source;
  Eigen::Vector2d detector_point;
};

/// K uniformly spaced angles over [start, start + 2π).
std::vector<double> uniform_angles(Index num_views, double start_rad = 0.0);

FanBeamGeometry make_geometry(Index num_views, Index num_cells, double pitch_mm,
                              double sdd_mm, double sad_mm, double offset_cells,
                              double start_angle_rad = 0.0);

/// Micro-CT scanner used for the reference experiments: 182 views over 2π,
/// 130 cells of 0.8 mm, sdd 291.20 mm, sad 115.84 mm, 1.5-cell offset.
FanBeamGeometry paper_geometry();

/// Isocenter field-of-view width divided by n.
double fov_pixel_size(const FanBeamGeometry& g, Index n);

double detector_coordinate(const FanBeamGeometry& g, double cell);
Eigen::Vector2d source_position(const FanBeamGeometry& g, Index k);
Eigen::Vector2d detector_position(const FanBeamGeometry& g, Index k, double u_mm);

/// Ray from the source to the centre of cell p in view k.
Ray ray(const FanBeamGeometry& g, Index k, Index p);

/// Perpendicular distance from a point to the infinite line through a ray.
double distance_to_line(const Ray& r, const Eigen::Vector2d& point);

/// JSON keys: views, cells, pitch_mm, sdd_mm, sad_mm, offset_cells and the
/// optional start_angle_rad.
FanBeamGeometry geometry_from_json(const std::string& json_text);
FanBeamGeometry load_geometry(const std::string& path);
std::string geometry_to_json(const FanBeamGeometry& g);

}  // namespace roict
