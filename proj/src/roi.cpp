#include "roict/roi.hpp"

#include <stdexcept>

namespace roict {

RoiDisk roi_from_pixels(const Eigen::Vector2d& center_px, double radius_px,
                        double pixel_size_mm) {
  if (!(radius_px > 0.0)) throw std::invalid_argument("roi: radius must be positive");
  return {center_px * pixel_size_mm, radius_px * pixel_size_mm};
}

Index ProjectionMask::count() const {
  return static_cast<Index>((values.array() != 0.0).count());
}

ProjectionMask build_mask(const FanBeamGeometry& g, const RoiDisk& roi) {
  g.validate();
  if (!(roi.radius_mm > 0.0)) throw std::invalid_argument("build_mask: radius must be positive");
  ProjectionMask mask{g.num_views, g.num_cells, Eigen::VectorXd::Zero(g.num_views * g.num_cells)};
  for (Index k = 0; k < g.num_views; ++k) {
    for (Index p = 0; p < g.num_cells; ++p) {
      if (distance_to_line(ray(g, k, p), roi.center_mm) < roi.radius_mm) {
        mask.values[k * g.num_cells + p] = 1.0;
      }
    }
  }
  return mask;
}

Eigen::VectorXd truncate(const Eigen::Ref<const Eigen::VectorXd>& y, const ProjectionMask& mask) {
  if (y.size() != mask.size()) throw std::invalid_argument("truncate: shape mismatch");
  return y.cwiseProduct(mask.values);
}

Sinogram truncate_sinogram(const Sinogram& y, const ProjectionMask& mask) {
  if (y.rows() != mask.num_views || y.cols() != mask.num_cells) {
    throw std::invalid_argument("truncate: shape mismatch");
  }
  return as_sinogram(y.reshaped<Eigen::RowMajor>().cwiseProduct(mask.values), mask.num_views, mask.num_cells);
}

std::vector<Index> roi_pixels(const ImageGrid& grid, const RoiDisk& roi) {
  std::vector<Index> out;
  const double r2 = roi.radius_mm * roi.radius_mm;
  for (Index j = 0; j < grid.n; ++j) {
    const double dx = grid.x_center(j) - roi.center_mm.x();
    for (Index i = 0; i < grid.n; ++i) {
      const double dy = grid.y_center(i) - roi.center_mm.y();
      if (dx * dx + dy * dy < r2) out.push_back(grid.linear(i, j));
    }
  }
  return out;
}

}  // namespace roict
