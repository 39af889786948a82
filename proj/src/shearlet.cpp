#include "roict/shearlet.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace roict {

namespace {

using ComplexGrid = Eigen::MatrixXcd;

// In-place 2D DFT; the inverse carries the 1/(R·C) factor.
void fft2(ComplexGrid& a, bool inverse) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in;
  Eigen::VectorXcd out;
  for (Index c = 0; c < a.cols(); ++c) {
    in = a.col(c);
    if (inverse) fft.inv(out, in); else fft.fwd(out, in);
    a.col(c) = out;
  }
  for (Index r = 0; r < a.rows(); ++r) {
    in = a.row(r).transpose();
    if (inverse) fft.inv(out, in); else fft.fwd(out, in);
    a.row(r) = out.transpose();
  }
}

// Smooth step with v(0) = 0, v(1) = 1 and v(x) + v(1 − x) = 1.
double meyer_aux(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

// 1 on [0, a], 0 beyond 2a, Meyer transition in between.
double radial_lowpass(double t, double a) {
  if (t <= a) return 1.0;
  if (t >= 2.0 * a) return 0.0;
  return std::cos(0.5 * std::numbers::pi * meyer_aux((t - a) / a));
}

// Bump supported on [−1, 1] whose integer shifts form a squared partition
// of unity.
double bump(double x) {
  const double ax = std::abs(x);
  if (ax >= 1.0) return 0.0;
  return std::cos(0.5 * std::numbers::pi * meyer_aux(ax));
}

// Frequency in units of the Nyquist rate for FFT bin i of a length-n axis.
double normalized_frequency(Index i, Index n) {
  const Index half = n / 2;
  const Index signed_bin = i < half ? i : i - n;
  return static_cast<double>(signed_bin) / static_cast<double>(half);
}

}  // namespace

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

ShearletSystem::ShearletSystem(Index rows, Index cols, int num_scales)
    : rows_(rows),
      cols_(cols),
      padded_rows_(next_pow2(rows)),
      padded_cols_(next_pow2(cols)),
      num_scales_(num_scales) {
  if (rows < 8 || cols < 8) throw std::invalid_argument("shearlet: rows and cols must be >= 8");
  if (num_scales < 1) throw std::invalid_argument("shearlet: need at least one scale");
  if (std::min(padded_rows_, padded_cols_) < (Index{1} << (num_scales + 2))) {
    throw std::invalid_argument("shearlet: grid too small for the requested number of scales");
  }

  const Index R = padded_rows_;
  const Index C = padded_cols_;
  Eigen::MatrixXd t(R, C);      // ∞-norm radius
  Eigen::MatrixXd w1(R, C);     // horizontal frequency
  Eigen::MatrixXd w2(R, C);     // vertical frequency
  for (Index c = 0; c < C; ++c) {
    for (Index r = 0; r < R; ++r) {
      w1(r, c) = normalized_frequency(c, C);
      w2(r, c) = normalized_frequency(r, R);
      t(r, c) = std::max(std::abs(w1(r, c)), std::abs(w2(r, c)));
    }
  }

  // Cutoffs a_j = 2^{j − J − 1}; the finest band reaches the Nyquist corner.
  auto cutoff = [&](int j) { return std::ldexp(1.0, j - num_scales - 1); };
  auto radial_band = [&](int j, double tt) {
    const double inner = radial_lowpass(tt, cutoff(j));
    const double outer = j + 1 < num_scales ? radial_lowpass(tt, cutoff(j + 1)) : 1.0;
    return std::sqrt(std::max(0.0, outer * outer - inner * inner));
  };

  bands_.push_back({ShearletBand::Kind::LowPass, -1, 0});
  windows_.push_back(t.unaryExpr([&](double tt) { return radial_lowpass(tt, cutoff(0)); }));

  for (int j = 0; j < num_scales; ++j) {
    const int level = (j + 1) / 2;  // ⌈j/2⌉
    const int reach = 1 << level;
    for (auto kind : {ShearletBand::Kind::Horizontal, ShearletBand::Kind::Vertical}) {
      for (int k = -reach; k <= reach; ++k) {
        Eigen::MatrixXd w(R, C);
        for (Index c = 0; c < C; ++c) {
          for (Index r = 0; r < R; ++r) {
            const double num = kind == ShearletBand::Kind::Horizontal ? w2(r, c) : w1(r, c);
            const double den = kind == ShearletBand::Kind::Horizontal ? w1(r, c) : w2(r, c);
            double directional = 0.0;
            if (den != 0.0) directional = bump(static_cast<double>(reach) * num / den - k);
            w(r, c) = radial_band(j, t(r, c)) * directional;
          }
        }
        bands_.push_back({kind, j, k});
        windows_.push_back(std::move(w));
      }
    }
  }

  // Symmetrize under ω → −ω so real inputs give real coefficients, then
  // renormalize to an exact discrete partition of unity.
  for (auto& w : windows_) {
    Eigen::MatrixXd sym(R, C);
    for (Index c = 0; c < C; ++c) {
      for (Index r = 0; r < R; ++r) {
        const double a = w(r, c);
        const double b = w((R - r) % R, (C - c) % C);
        sym(r, c) = std::sqrt(0.5 * (a * a + b * b));
      }
    }
    w = std::move(sym);
  }
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(R, C);
  for (const auto& w : windows_) total += w.cwiseAbs2();
  if (!(total.minCoeff() > 0.0)) throw std::logic_error("shearlet: windows do not cover the grid");
  const Eigen::MatrixXd inv_norm = total.cwiseSqrt().cwiseInverse();
  for (auto& w : windows_) w = w.cwiseProduct(inv_norm);
}

Index ShearletSystem::shear_count(int scale) const {
  Index count = 0;
  for (const auto& b : bands_) {
    if (b.kind != ShearletBand::Kind::LowPass && b.scale == scale) ++count;
  }
  return count;
}

Eigen::MatrixXd ShearletSystem::window_energy() const {
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(padded_rows_, padded_cols_);
  for (const auto& w : windows_) total += w.cwiseAbs2();
  return total;
}

Eigen::MatrixXd ShearletSystem::pad(const Sinogram& x) const {
  check_shape(x);
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(padded_rows_, padded_cols_);
  padded.topLeftCorner(rows_, cols_) = x;
  return padded;
}

CoeffSet ShearletSystem::forward(const Sinogram& x) const {
  ComplexGrid spectrum = pad(x).cast<std::complex<double>>();
  fft2(spectrum, false);
  CoeffSet out;
  out.reserve(windows_.size());
  ComplexGrid band;
  for (const auto& w : windows_) {
    band = spectrum.cwiseProduct(w.cast<std::complex<double>>());
    fft2(band, true);
    out.push_back(band.real());
  }
  return out;
}

Sinogram ShearletSystem::adjoint(const CoeffSet& c) const {
  if (c.size() != windows_.size()) throw std::invalid_argument("shearlet adjoint: band count mismatch");
  ComplexGrid acc = ComplexGrid::Zero(padded_rows_, padded_cols_);
  ComplexGrid band;
  for (std::size_t b = 0; b < c.size(); ++b) {
    if (c[b].rows() != padded_rows_ || c[b].cols() != padded_cols_) {
      throw std::invalid_argument("shearlet adjoint: band shape mismatch");
    }
    band = c[b].cast<std::complex<double>>();
    fft2(band, false);
    acc += band.cwiseProduct(windows_[b].cast<std::complex<double>>());
  }
  fft2(acc, true);
  return Sinogram(acc.real().topLeftCorner(rows_, cols_));
}

ShearletSystem build_shearlet_system(Index rows, Index cols, int num_scales) {
  return ShearletSystem(rows, cols, num_scales);
}

}  // namespace roict
