#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "roict/types.hpp"

namespace roict {

struct MeritReport {
  double psnr_db = 0.0;
  double rel_err = 0.0;
  Index roi_pixel_count = 0;
  double mpv = 1.0;
};

/// 10·log₁₀(mpv² / e_MSE) with the mean taken over `pixels` (flat indices).
/// Returns +∞ when the reconstruction is exact on the ROI.
template <typename DerivedA, typename DerivedB>
double psnr_roi(const Eigen::DenseBase<DerivedA>& recon, const Eigen::DenseBase<DerivedB>& truth,
                std::span<const Index> pixels, double mpv) {
  if (pixels.empty()) throw std::invalid_argument("psnr_roi: empty ROI");
  if (!(mpv > 0.0)) throw std::invalid_argument("psnr_roi: mpv must be positive");
  if (recon.size() != truth.size()) throw std::invalid_argument("psnr_roi: shape mismatch");
  double sse = 0.0;
  for (Index idx : pixels) {
    const double e = recon.derived().coeff(idx) - truth.derived().coeff(idx);
    sse += e * e;
  }
  const double mse = sse / static_cast<double>(pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mpv * mpv / mse);
}

/// ‖recon − truth‖₂ / ‖truth‖₂ restricted to `pixels`.
template <typename DerivedA, typename DerivedB>
double rel_err_roi(const Eigen::DenseBase<DerivedA>& recon, const Eigen::DenseBase<DerivedB>& truth,
                   std::span<const Index> pixels) {
  if (recon.size() != truth.size()) throw std::invalid_argument("rel_err_roi: shape mismatch");
  double num = 0.0;
  double den = 0.0;
  for (Index idx : pixels) {
    const double t = truth.derived().coeff(idx);
    const double e = recon.derived().coeff(idx) - t;
    num += e * e;
    den += t * t;
  }
  if (den == 0.0) throw std::invalid_argument("rel_err_roi: truth vanishes on the ROI");
  return std::sqrt(num / den);
}

/// Both figures of merit; mpv defaults to the maximum of the ground truth.
MeritReport evaluate_roi(const ImageArray& recon, const ImageArray& truth,
                         std::span<const Index> pixels, double mpv = -1.0);

}  // namespace roict
