#include "doctest.h"

#include <stdexcept>

#include "roict/roi.hpp"
#include "support.hpp"

using namespace roict;
using namespace roict::testing;

namespace {

ProjectionMask brute_force(const FanBeamGeometry& g, const RoiDisk& roi) {
  ProjectionMask m{g.num_views, g.num_cells, Eigen::VectorXd::Zero(g.num_views * g.num_cells)};
  for (Index k = 0; k < g.num_views; ++k) {
    for (Index p = 0; p < g.num_cells; ++p) {
      if (distance_to_line(ray(g, k, p), roi.center_mm) < roi.radius_mm) m.values[k * g.num_cells + p] = 1.0;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("pixel-unit ROI conversion") {
  const RoiDisk r = roi_from_pixels({2.0, -4.0}, 10.0, 0.5);
  CHECK(r.center_mm.x() == 1.0);
  CHECK(r.center_mm.y() == -2.0);
  CHECK(r.radius_mm == 5.0);
}

TEST_CASE("mask extremes") {
  const FanBeamGeometry g = paper_geometry();
  CHECK(build_mask(g, {Eigen::Vector2d::Zero(), 1e4}).count() == 182 * 130);
  CHECK(build_mask(g, {Eigen::Vector2d(0.3, 0.2), 1e-9}).count() == 0);
}

TEST_CASE("centred ROI mask matches brute force") {
  const FanBeamGeometry g = paper_geometry();
  const double h = fov_pixel_size(g, 128);
  const RoiDisk roi{Eigen::Vector2d::Zero(), 0.15 * 128 * h};
  const ProjectionMask m = build_mask(g, roi);
  CHECK(m.values == brute_force(g, roi).values);
  CHECK(m.count() > 0);
  CHECK(m.count() < 182 * 130);
}

TEST_CASE("mask monotone in the radius") {
  const FanBeamGeometry g = paper_geometry();
  const Eigen::Vector2d c(1.5, -2.0);
  const ProjectionMask a = build_mask(g, {c, 5.0});
  const ProjectionMask b = build_mask(g, {c, 9.0});
  CHECK((a.values.array() <= b.values.array()).all());
  CHECK(((a.values.array() == 0.0) || (a.values.array() == 1.0)).all());
}

TEST_CASE("truncation") {
  const FanBeamGeometry g = make_geometry(6, 10, 1.0, 200, 100, 0);
  std::mt19937_64 rng(1);
  const Eigen::VectorXd y = random_vector(rng, 60);
  const ProjectionMask ones{6, 10, Eigen::VectorXd::Ones(60)};
  const ProjectionMask zeros{6, 10, Eigen::VectorXd::Zero(60)};
  CHECK(truncate(y, ones) == y);
  CHECK(truncate(y, zeros).isZero(0.0));
  const ProjectionMask m = build_mask(g, {Eigen::Vector2d(0.5, 0.0), 1.0});
  const Eigen::VectorXd t = truncate(y, m);
  CHECK(truncate(t, m) == t);
  CHECK((Eigen::VectorXd::Ones(60) - m.values).cwiseProduct(t).isZero(0.0));
  const Sinogram ts = truncate_sinogram(as_sinogram(y, 6, 10), m);
  CHECK(flat(ts) == t);
  CHECK_THROWS_AS(truncate(Eigen::VectorXd::Zero(59), m), std::invalid_argument);
  CHECK_THROWS_AS(truncate_sinogram(Sinogram::Zero(5, 10), m), std::invalid_argument);
}

TEST_CASE("roi pixels") {
  const ImageGrid grid{128, 0.4};
  CHECK(roi_pixels(grid, {Eigen::Vector2d::Zero(), 1e3}).size() == 128u * 128u);
  const ImageGrid odd{9, 1.0};
  const auto one = roi_pixels(odd, {Eigen::Vector2d::Zero(), 0.4});
  REQUIRE(one.size() == 1u);
  CHECK(one[0] == odd.linear(4, 4));

  const double radius = 0.5 * 128 * 0.4;
  std::size_t count = 0;
  for (Index i = 0; i < 128; ++i) {
    for (Index j = 0; j < 128; ++j) {
      const double x = grid.x_center(j);
      const double y = grid.y_center(i);
      if (x * x + y * y < radius * radius) ++count;
    }
  }
  CHECK(roi_pixels(grid, {Eigen::Vector2d::Zero(), radius}).size() == count);
}
