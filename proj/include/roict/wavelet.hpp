#pragma once

#include <array>

#include "roict/frame.hpp"

namespace roict {

/// Daubechies 4 (eight taps, four vanishing moments) scaling filter,
/// normalized so Σh = √2.
const std::array<double, 8>& db4_lowpass();
/// Quadrature mirror high-pass g[k] = (−1)^k h[7 − k].
std::array<double, 8> db4_highpass();

/// One-level undecimated (à trous) separable 2D wavelet transform with
/// periodic boundaries. Bands are LL, LH, HL, HH, each K×P, where the first
/// letter is the filter along views and the second along cells:
///
///   c_b[i, j] = ½ Σ_{a,e} f_b^row[a] f_b^col[e] x[(i − a) mod K, (j − e) mod P].
///
/// The ½ factor makes the adjoint a left inverse, Φᵀ Φ = I.
class UndecimatedWavelet final : public FrameOperator {
 public:
  UndecimatedWavelet(Index rows, Index cols);

  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  Index num_bands() const override { return 4; }
  std::string name() const override { return "wavelet"; }

  CoeffSet forward(const Sinogram& x) const override;
  Sinogram adjoint(const CoeffSet& c) const override;

 private:
  Index rows_;
  Index cols_;
};

}  // namespace roict
