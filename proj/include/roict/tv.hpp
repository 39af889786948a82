#pragma once

#include "roict/types.hpp"

namespace roict {

/// Smoothed total variation
///   TV_δ(f) = Σ_{i,j} √((D_x f)² + (D_y f)² + δ²)
/// with forward differences (D_x along columns j, D_y along rows i) and zero
/// difference past the last column/row. All functions throw
/// std::invalid_argument for δ ≤ 0.
struct TvParams {
  double delta = 1e-3;
};

double tv_value(const Eigen::Ref<const Eigen::MatrixXd>& f, double delta);

/// Exact gradient of tv_value (negative divergence of the normalized
/// difference field).
ImageArray tv_grad(const Eigen::Ref<const Eigen::MatrixXd>& f, double delta);

/// Value, with the gradient accumulated as grad += scale · ∇TV_δ(f).
double tv_value_and_grad(const Eigen::Ref<const Eigen::MatrixXd>& f, double delta,
                         Eigen::Ref<Eigen::MatrixXd> grad, double scale = 1.0);

}  // namespace roict
