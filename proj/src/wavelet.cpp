#include "roict/wavelet.hpp"

#include <stdexcept>

namespace roict {

const std::array<double, 8>& db4_lowpass() {
  static const std::array<double, 8> h{
      0.23037781330885523,  0.7148465705525415,   0.6308807679295904,
      -0.02798376941698385, -0.18703481171888114, 0.030841381835986965,
      0.032883011666982945, -0.010597401784997278};
  return h;
}

std::array<double, 8> db4_highpass() {
  const auto& h = db4_lowpass();
  std::array<double, 8> g{};
  for (std::size_t k = 0; k < 8; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[7 - k];
  return g;
}

namespace {

using Filter = std::array<double, 8>;

// out[i, j] = scale Σ_{a,e} fr[a] fc[e] x[(i − a) mod K, (j − e) mod P]
Sinogram filter2(const Sinogram& x, const Filter& fr, const Filter& fc, double scale) {
  const Index K = x.rows();
  const Index P = x.cols();
  Sinogram tmp = Sinogram::Zero(K, P);
  for (Index i = 0; i < K; ++i) {
    for (Index j = 0; j < P; ++j) {
      double acc = 0.0;
      for (Index e = 0; e < 8; ++e) acc += fc[static_cast<std::size_t>(e)] * x(i, ((j - e) % P + P) % P);
      tmp(i, j) = acc;
    }
  }
  Sinogram out = Sinogram::Zero(K, P);
  for (Index i = 0; i < K; ++i) {
    for (Index a = 0; a < 8; ++a) {
      out.row(i) += fr[static_cast<std::size_t>(a)] * tmp.row(((i - a) % K + K) % K);
    }
  }
  out *= scale;
  return out;
}

// Adjoint of filter2: correlation instead of convolution.
Sinogram filter2_adjoint(const Eigen::MatrixXd& c, const Filter& fr, const Filter& fc,
                         double scale) {
  const Index K = c.rows();
  const Index P = c.cols();
  Sinogram tmp = Sinogram::Zero(K, P);
  for (Index i = 0; i < K; ++i) {
    for (Index j = 0; j < P; ++j) {
      double acc = 0.0;
      for (Index e = 0; e < 8; ++e) acc += fc[static_cast<std::size_t>(e)] * c(i, (j + e) % P);
      tmp(i, j) = acc;
    }
  }
  Sinogram out = Sinogram::Zero(K, P);
  for (Index i = 0; i < K; ++i) {
    for (Index a = 0; a < 8; ++a) {
      out.row(i) += fr[static_cast<std::size_t>(a)] * tmp.row((i + a) % K);
    }
  }
  out *= scale;
  return out;
}

}  // namespace

UndecimatedWavelet::UndecimatedWavelet(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 8 || cols < 8) throw std::invalid_argument("wavelet: rows and cols must be >= 8");
}

CoeffSet UndecimatedWavelet::forward(const Sinogram& x) const {
  check_shape(x);
  const Filter& h = db4_lowpass();
  const Filter g = db4_highpass();
  return {filter2(x, h, h, 0.5), filter2(x, h, g, 0.5), filter2(x, g, h, 0.5),
          filter2(x, g, g, 0.5)};
}

Sinogram UndecimatedWavelet::adjoint(const CoeffSet& c) const {
  if (c.size() != 4) throw std::invalid_argument("wavelet adjoint: expected four bands");
  for (const auto& b : c) {
    if (b.rows() != rows_ || b.cols() != cols_) {
      throw std::invalid_argument("wavelet adjoint: band shape mismatch");
    }
  }
  const Filter& h = db4_lowpass();
  const Filter g = db4_highpass();
  return filter2_adjoint(c[0], h, h, 0.5) + filter2_adjoint(c[1], h, g, 0.5) +
         filter2_adjoint(c[2], g, h, 0.5) + filter2_adjoint(c[3], g, g, 0.5);
}

}  // namespace roict
