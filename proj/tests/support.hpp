#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "roict/geometry.hpp"
#include "roict/objective.hpp"
#include "roict/projector.hpp"
#include "roict/roi.hpp"
#include "roict/shearlet.hpp"

namespace roict::testing {

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Index n, double lo = -1.0,
                                     double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// n = 8, K = 10, P = 12 desk instance. The pixel size is shrunk below the
// field-of-view size so every pixel is seen in every view.
struct SmallInstance {
  FanBeamGeometry geometry = make_geometry(10, 12, 1.0, 200.0, 100.0, 0.25, 0.1);
  ImageGrid grid{8, 0.7 * fov_pixel_size(make_geometry(10, 12, 1.0, 200.0, 100.0, 0.25), 8)};
  std::shared_ptr<const SystemMatrix> system =
      std::make_shared<const SystemMatrix>(assemble(geometry, grid));

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(system->weights()); }
};

// Image as a piecewise-constant function of isocenter coordinates (mm).
inline double image_at(const ImageArray& f, const ImageGrid& grid, double x, double y) {
  const double half = 0.5 * grid.width_mm();
  const double jf = std::floor((x + half) / grid.pixel_size_mm);
  const double i_f = std::floor((half - y) / grid.pixel_size_mm);
  if (jf < 0 || i_f < 0 || jf >= static_cast<double>(grid.n) || i_f >= static_cast<double>(grid.n)) {
    return 0.0;
  }
  return f(static_cast<Index>(i_f), static_cast<Index>(jf));
}

// Trapezoid line integral of `g` along the segment a→b clipped to the square
// |x|, |y| ≤ half, with `points` samples on the clipped part.
inline double line_integral(const std::function<double(double, double)>& g,
                            const Eigen::Vector2d& a, const Eigen::Vector2d& b, double half,
                            int points = 2001) {
  const Eigen::Vector2d d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (std::abs(a[axis]) > half) return 0.0;
      continue;
    }
    double lo = (-half - a[axis]) / d[axis];
    double hi = (half - a[axis]) / d[axis];
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
  }
  if (!(t1 > t0)) return 0.0;
  const double len = (t1 - t0) * d.norm();
  double sum = 0.0;
  for (int s = 0; s < points; ++s) {
    const double t = t0 + (t1 - t0) * static_cast<double>(s) / (points - 1);
    const Eigen::Vector2d q = a + t * d;
    const double w = (s == 0 || s == points - 1) ? 0.5 : 1.0;
    sum += w * g(q.x(), q.y());
  }
  return sum * len / (points - 1);
}

// Average of the line integral over `sub` rays spread uniformly across cell p,
// which is what the distance-driven weights approximate.
inline double cell_averaged_integral(const FanBeamGeometry& g, Index k, Index p,
                                     const std::function<double(double, double)>& fn,
                                     double half, int sub = 8, int points = 2001) {
  const Eigen::Vector2d src = source_position(g, k);
  double acc = 0.0;
  for (int s = 0; s < sub; ++s) {
    const double cell = static_cast<double>(p) - 0.5 + (s + 0.5) / sub;
    acc += line_integral(fn, src, detector_position(g, k, detector_coordinate(g, cell)), half, points);
  }
  return acc / sub;
}

}  // namespace roict::testing
