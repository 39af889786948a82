#include "roict/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace roict {

bool Ellipse::contains(double x, double y) const {
  const double phi = rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double dx = x - center_x;
  const double dy = y - center_y;
  const double u = (dx * c + dy * s) / semi_axis_a;
  const double v = (-dx * s + dy * c) / semi_axis_b;
  return u * u + v * v <= 1.0;
}

const std::array<Ellipse, 10>& modified_shepp_logan() {
  //                              A      a       b       x0     y0       phi
  static const std::array<Ellipse, 10> table{{
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  }};
  return table;
}

ImageArray generate_phantom(Index n) {
  if (n < 2) throw std::invalid_argument("generate_phantom: n must be at least 2");
  const auto& table = modified_shepp_logan();
  ImageArray img(n, n);
  for (Index j = 0; j < n; ++j) {
    const double x = normalized_x(j, n);
    for (Index i = 0; i < n; ++i) {
      const double y = normalized_y(i, n);
      double v = 0.0;
      for (const auto& e : table) {
        if (e.contains(x, y)) v += e.intensity;
      }
      img(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace roict
