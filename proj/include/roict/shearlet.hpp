#pragma once

#include <vector>

#include "roict/frame.hpp"

namespace roict {

/// Identifies one frequency window of the shearlet system.
struct ShearletBand {
  enum class Kind { LowPass, Horizontal, Vertical };
  Kind kind = Kind::LowPass;
  int scale = -1;  // -1 for the low-pass band
  int shear = 0;
};

/// Band-limited cone-adapted classical shearlets on a zero-padded dyadic
/// grid. Windows are products of a Meyer-type radial band and a smooth bump
/// in the slope ω₂/ω₁ (or ω₁/ω₂ in the vertical cone); they are symmetrized
/// under ω → −ω and renormalized so that Σ_b W_b(ω)² = 1 at every grid
/// frequency. Scale j uses 2·2^⌈j/2⌉ + 1 shears per cone.
///
///   scales = 3:   j = 0 → 3 + 3,   j = 1 → 5 + 5,   j = 2 → 5 + 5
///
/// plus one low-pass window, 27 bands in total.
class ShearletSystem final : public FrameOperator {
 public:
  ShearletSystem(Index rows, Index cols, int num_scales);

  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  Index padded_rows() const { return padded_rows_; }
  Index padded_cols() const { return padded_cols_; }
  int num_scales() const { return num_scales_; }
  Index num_bands() const override { return static_cast<Index>(bands_.size()); }
  std::string name() const override { return "shearlet"; }

  const std::vector<ShearletBand>& bands() const { return bands_; }
  /// Frequency window of band b in FFT ordering (padded_rows × padded_cols).
  const Eigen::MatrixXd& window(Index b) const { return windows_[static_cast<std::size_t>(b)]; }
  /// Number of directional windows emitted for scale j.
  Index shear_count(int scale) const;
  /// Σ_b W_b(ω)² on the padded grid.
  Eigen::MatrixXd window_energy() const;

  CoeffSet forward(const Sinogram& x) const override;
  Sinogram adjoint(const CoeffSet& c) const override;

  Eigen::MatrixXd pad(const Sinogram& x) const;

 private:
  Index rows_;
  Index cols_;
  Index padded_rows_;
  Index padded_cols_;
  int num_scales_;
  std::vector<ShearletBand> bands_;
  std::vector<Eigen::MatrixXd> windows_;
};

/// Builds the shearlet system for K×P arrays; sizes are padded to the next
/// power of two per dimension. Throws std::invalid_argument when rows or
/// cols < 8, num_scales < 1, or the padded grid is too small for the
/// requested number of scales.
ShearletSystem build_shearlet_system(Index rows, Index cols, int num_scales = 3);

/// Smallest power of two ≥ n.
Index next_pow2(Index n);

}  // namespace roict
