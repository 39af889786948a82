#pragma once

#include <Eigen/Core>

namespace roict {

using Eigen::Index;

/// N×N attenuation map. Column-major storage makes `data()` the
/// column-stacked image vector used by the system matrix.
using ImageArray = Eigen::MatrixXd;

/// K×P projection array (views × detector cells). Row-major storage makes
/// `data()` the sinogram vector with index k·P + p.
using Sinogram =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Flat view of any contiguous Eigen matrix.
template <typename Derived>
Eigen::Map<const Eigen::VectorXd> flat(const Eigen::PlainObjectBase<Derived>& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

template <typename Derived>
Eigen::Map<Eigen::VectorXd> flat(Eigen::PlainObjectBase<Derived>& m) {
  return Eigen::Map<Eigen::VectorXd>(m.data(), m.size());
}

inline ImageArray as_image(const Eigen::Ref<const Eigen::VectorXd>& v, Index n) {
  return Eigen::Map<const ImageArray>(v.data(), n, n);
}

inline Sinogram as_sinogram(const Eigen::Ref<const Eigen::VectorXd>& v, Index views,
                            Index cells) {
  return Eigen::Map<const Sinogram>(v.data(), views, cells);
}

/// Square pixel grid centred on the isocenter. Pixel (i, j) has its centre at
/// x = (j + 1/2 - n/2)·h, y = (n/2 - i - 1/2)·h; rows grow downward.
struct ImageGrid {
  Index n = 0;
  double pixel_size_mm = 1.0;

  double width_mm() const { return static_cast<double>(n) * pixel_size_mm; }
  double x_center(Index j) const {
    return (static_cast<double>(j) + 0.5 - 0.5 * static_cast<double>(n)) * pixel_size_mm;
  }
  double y_center(Index i) const {
    return (0.5 * static_cast<double>(n) - static_cast<double>(i) - 0.5) * pixel_size_mm;
  }
  /// Column-stacked linear index of pixel (i, j).
  Index linear(Index i, Index j) const { return j * n + i; }
};

}  // namespace roict
