#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "roict/geometry.hpp"
#include "roict/raw_io.hpp"
#include "roict/roi.hpp"
#include "roict/types.hpp"

namespace roict {

using Gray8 = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Min-max windowed 8-bit rendering; a constant array maps to mid-gray (128).
/// Throws std::invalid_argument on non-finite input.
template <typename Derived>
Gray8 render(const Eigen::DenseBase<Derived>& v) {
  if (!v.derived().allFinite()) throw std::invalid_argument("render: non-finite input");
  Gray8 out(v.rows(), v.cols());
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  if (!(hi > lo)) {
    out.setConstant(128);
    return out;
  }
  out = (255.0 * (v.derived().template cast<double>().array() - lo) / (hi - lo))
            .round()
            .template cast<std::uint8_t>();
  return out;
}

/// Fixed linear map [lo, hi] → [0, 255] with clamping.
Gray8 render_range(const ImageArray& image, double lo, double hi);

/// Paints the ROI circle as white dashes on an image rendering: pixels whose
/// centre lies within half a pixel of the circle, on alternating arcs.
void overlay_roi_circle(Gray8& canvas, const ImageGrid& grid, const RoiDisk& roi,
                        int dashes = 32);

/// Paints the boundary cells of the masked run in every view (the two
/// sinusoid-like edges of P(S)) on alternating groups of `dash_views` views.
void overlay_mask_boundary(Gray8& canvas, const ProjectionMask& mask, int dash_views = 4);

/// Views on which overlay_mask_boundary draws.
inline bool mask_overlay_view_drawn(Index k, int dash_views) {
  return (k / dash_views) % 2 == 0;
}

void write_png(const std::string& path, const Gray8& pixels);

}  // namespace roict
