#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "roict/geometry.hpp"
#include "roict/types.hpp"

namespace roict {

/// One non-empty intersection between source interval `source` and
/// destination interval `dest` of two 1D partitions.
struct Overlap {
  Index source;
  Index dest;
  double length;
};

/// Pairwise overlaps of two strictly increasing boundary sequences, merged in
/// a single sweep. Only strictly positive lengths are reported.
std::vector<Overlap> overlap_intervals(std::span<const double> source_bounds,
                                       std::span<const double> dest_bounds);

/// Distance-driven kernel: resamples piecewise-constant `source_values`
/// defined on `source_bounds` onto cells bounded by `dest_bounds`,
/// b_n = Σ_m c_m · |[ξ_m, ξ_{m+1}] ∩ [υ_n, υ_{n+1}]| / (υ_{n+1} − υ_n).
Eigen::VectorXd dd_kernel(std::span<const double> source_bounds,
                          std::span<const double> source_values,
                          std::span<const double> dest_bounds);

/// Distance-driven fan-beam system matrix W (KP × N²). Row index k·P + p,
/// column index j·N + i (column-stacked image).
class SystemMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

  SystemMatrix() = default;
  SystemMatrix(Storage weights, Index num_views, Index num_cells, ImageGrid grid);

  Index rows() const { return weights_.rows(); }
  Index cols() const { return weights_.cols(); }
  Index num_views() const { return num_views_; }
  Index num_cells() const { return num_cells_; }
  const ImageGrid& grid() const { return grid_; }
  const Storage& weights() const { return weights_; }
  Index nonzeros() const { return weights_.nonZeros(); }

  /// W f on flat vectors.
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& f) const;
  /// Wᵀ y on flat vectors.
  Eigen::VectorXd apply_adjoint(const Eigen::Ref<const Eigen::VectorXd>& y) const;

 private:
  Storage weights_;
  Index num_views_ = 0;
  Index num_cells_ = 0;
  ImageGrid grid_;
};

/// Assembles W for an n×n image with pixel size fov_pixel_size(g, n).
SystemMatrix assemble(const FanBeamGeometry& g, Index n);
/// Assembles W for an explicit image grid.
SystemMatrix assemble(const FanBeamGeometry& g, const ImageGrid& grid);

Sinogram forward(const SystemMatrix& w, const ImageArray& f);
ImageArray adjoint(const SystemMatrix& w, const Sinogram& y);

/// Writes triplets as `ROISMTX\0`, u64 nnz, then (u64 row, u64 col, f64 w)
/// little-endian records in row-major order.
void write_system_matrix(const SystemMatrix& w, const std::string& path);
SystemMatrix::Storage read_system_matrix(const std::string& path);

}  // namespace roict
