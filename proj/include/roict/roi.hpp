#pragma once

#include <vector>

#include <Eigen/Core>

#include "roict/geometry.hpp"
#include "roict/types.hpp"

namespace roict {

/// Disk-shaped region of interest in isocenter coordinates (mm).
struct RoiDisk {
  Eigen::Vector2d center_mm = Eigen::Vector2d::Zero();
  double radius_mm = 0.0;
};

/// Builds a disk from pixel units: the centre is an offset from the
/// isocenter (x right, y up) and the radius a pixel count.
RoiDisk roi_from_pixels(const Eigen::Vector2d& center_px, double radius_px,
                        double pixel_size_mm);

/// Diagonal 0/1 operator over sinogram samples (index k·P + p).
struct ProjectionMask {
  Index num_views = 0;
  Index num_cells = 0;
  Eigen::VectorXd values;

  Index size() const { return values.size(); }
  Index count() const;
  Sinogram as_sinogram() const { return roict::as_sinogram(values, num_views, num_cells); }
};

/// Entry (k, p) is 1 iff the ray through the centre of cell p in view k
/// passes strictly closer than the radius to the ROI centre.
ProjectionMask build_mask(const FanBeamGeometry& g, const RoiDisk& roi);

/// Elementwise M·y. Throws std::invalid_argument on shape mismatch.
Eigen::VectorXd truncate(const Eigen::Ref<const Eigen::VectorXd>& y,
                         const ProjectionMask& mask);
Sinogram truncate_sinogram(const Sinogram& y, const ProjectionMask& mask);

/// Column-stacked indices of pixels whose centres lie strictly inside the disk.
std::vector<Index> roi_pixels(const ImageGrid& grid, const RoiDisk& roi);

}  // namespace roict
