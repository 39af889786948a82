#pragma once

#include <array>

#include "roict/types.hpp"

namespace roict {

struct Ellipse {
  double intensity;
  double semi_axis_a;  // along the rotated x axis, normalized units
  double semi_axis_b;
  double center_x;
  double center_y;
  double rotation_deg;

  /// Membership test for a point in normalized [-1, 1]² coordinates.
  bool contains(double x, double y) const;
};

/// The ten-ellipse modified Shepp-Logan table (Toft's contrast-enhanced
/// variant, the one shipped by MATLAB's `phantom`).
const std::array<Ellipse, 10>& modified_shepp_logan();

/// Rasterizes the modified Shepp-Logan phantom by pixel-centre sampling,
/// clipped to [0, 1]. Throws std::invalid_argument for n < 2.
ImageArray generate_phantom(Index n);

/// Normalized coordinates of the centre of pixel (i, j) on an n×n grid.
inline double normalized_x(Index j, Index n) {
  return -1.0 + (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(n);
}
inline double normalized_y(Index i, Index n) {
  return 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
}

}  // namespace roict
