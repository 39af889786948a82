#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "roict/shearlet.hpp"
#include "roict/tv.hpp"
#include "roict/wavelet.hpp"
#include "support.hpp"

using namespace roict;
using namespace roict::testing;

namespace {

Sinogram random_sinogram(std::mt19937_64& rng, Index r, Index c) {
  return as_sinogram(random_vector(rng, r * c), r, c);
}

const ShearletSystem& sinogram_shearlets() {
  static const ShearletSystem sys(182, 130, 3);
  return sys;
}

}  // namespace

TEST_CASE("shearlet layout") {
  const ShearletSystem& sys = sinogram_shearlets();
  CHECK(sys.padded_rows() == 256);
  CHECK(sys.padded_cols() == 256);
  CHECK(sys.num_bands() == 27);
  CHECK(sys.shear_count(0) == 6);
  CHECK(sys.shear_count(1) == 10);
  CHECK(sys.shear_count(2) == 10);
  CHECK(next_pow2(130) == 256);
  CHECK(next_pow2(256) == 256);
}

TEST_CASE("shearlet windows form an exact partition of unity") {
  const ShearletSystem& sys = sinogram_shearlets();
  CHECK((sys.window_energy().array() - 1.0).abs().maxCoeff() <= 1e-12);
  for (Index b = 0; b < sys.num_bands(); ++b) CHECK(sys.window(b).minCoeff() >= 0.0);
}

TEST_CASE("shearlet size checks") {
  CHECK_THROWS_AS(ShearletSystem(7, 16, 1), std::invalid_argument);
  CHECK_THROWS_AS(ShearletSystem(16, 16, 0), std::invalid_argument);
  CHECK_THROWS_AS(ShearletSystem(16, 16, 3), std::invalid_argument);
  CHECK_NOTHROW(ShearletSystem(16, 16, 2));
  const ShearletSystem& sys = sinogram_shearlets();
  CHECK_THROWS_AS(sys.forward(Sinogram::Zero(182, 129)), std::invalid_argument);
  CHECK_THROWS_AS(sys.adjoint(CoeffSet(3)), std::invalid_argument);
}

TEST_CASE("shearlet tight frame and isometry") {
  const ShearletSystem& sys = sinogram_shearlets();
  std::mt19937_64 rng(7);
  for (int t = 0; t < 3; ++t) {
    const Sinogram x = random_sinogram(rng, 182, 130);
    const CoeffSet c = sys.forward(x);
    const Sinogram back = sys.adjoint(c);
    CHECK((back - x).norm() <= 1e-10 * x.norm());
    CHECK(std::abs(std::sqrt(squared_norm(c)) - sys.pad(x).norm()) <= 1e-10 * x.norm());
  }
  const CoeffSet zero = sys.forward(Sinogram::Zero(182, 130));
  CHECK(squared_norm(zero) == 0.0);
}

TEST_CASE("constant input lives in the low-pass band") {
  const ShearletSystem sys(32, 32, 2);
  const CoeffSet c = sys.forward(Sinogram::Constant(32, 32, 2.5));
  REQUIRE(sys.bands()[0].kind == ShearletBand::Kind::LowPass);
  for (std::size_t b = 1; b < c.size(); ++b) CHECK(c[b].cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(c[0].norm() == doctest::Approx(2.5 * 32).epsilon(1e-12));
}

TEST_CASE("shearlet linearity") {
  const ShearletSystem sys(40, 24, 2);
  std::mt19937_64 rng(9);
  const Sinogram x = random_sinogram(rng, 40, 24);
  const Sinogram y = random_sinogram(rng, 40, 24);
  const CoeffSet cx = sys.forward(x);
  const CoeffSet cy = sys.forward(y);
  const CoeffSet cxy = sys.forward(Sinogram(2.0 * x - 3.0 * y));
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t b = 0; b < cxy.size(); ++b) {
    err += (cxy[b] - 2.0 * cx[b] + 3.0 * cy[b]).squaredNorm();
    ref += cxy[b].squaredNorm();
  }
  CHECK(std::sqrt(err) <= 1e-12 * std::sqrt(ref));
}

TEST_CASE("db4 filters") {
  const auto& h = db4_lowpass();
  double sum = 0.0;
  double sq = 0.0;
  for (double v : h) {
    sum += v;
    sq += v * v;
  }
  CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));
  const auto g = db4_highpass();
  double gs = 0.0;
  double orth = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    gs += g[k];
    orth += g[k] * h[k];
  }
  CHECK(std::abs(gs) <= 1e-12);
  CHECK(std::abs(orth) <= 1e-12);
}

TEST_CASE("undecimated wavelet") {
  const UndecimatedWavelet w(20, 16);
  std::mt19937_64 rng(13);
  const Sinogram x = random_sinogram(rng, 20, 16);
  const CoeffSet c = w.forward(x);
  REQUIRE(c.size() == 4u);
  CHECK((w.adjoint(c) - x).norm() <= 1e-10 * x.norm());
  CHECK(std::abs(squared_norm(c) - x.squaredNorm()) <= 1e-10 * x.squaredNorm());

  const CoeffSet cc = w.forward(Sinogram::Constant(20, 16, 3.0));
  for (std::size_t b = 1; b < 4; ++b) CHECK(cc[b].cwiseAbs().maxCoeff() <= 1e-12);

  // Impulse: each band holds ½ f_row[a] f_col[e] at offset (a, e).
  Sinogram impulse = Sinogram::Zero(20, 16);
  impulse(3, 5) = 1.0;
  const CoeffSet ci = w.forward(impulse);
  const auto& lo = db4_lowpass();
  const auto hi = db4_highpass();
  const std::array<const double*, 2> taps{lo.data(), hi.data()};
  for (int b = 0; b < 4; ++b) {
    const double* fr = taps[static_cast<std::size_t>(b / 2)];
    const double* fc = taps[static_cast<std::size_t>(b % 2)];
    double expected_mass = 0.0;
    for (Index a = 0; a < 8; ++a) {
      for (Index e = 0; e < 8; ++e) {
        CHECK(ci[static_cast<std::size_t>(b)](3 + a, 5 + e) ==
              doctest::Approx(0.5 * fr[a] * fc[e]).epsilon(1e-14));
        expected_mass += 0.5 * std::abs(fr[a] * fc[e]);
      }
    }
    // Nothing outside the 8x8 footprint.
    CHECK(ci[static_cast<std::size_t>(b)].cwiseAbs().sum() == doctest::Approx(expected_mass));
  }
  CHECK_THROWS_AS(UndecimatedWavelet(4, 16), std::invalid_argument);
  CHECK_THROWS_AS(w.forward(Sinogram::Zero(20, 15)), std::invalid_argument);
}

TEST_CASE("smoothed TV closed forms") {
  Eigen::MatrixXd f(2, 2);
  f << 0, 1, 0, 1;
  CHECK(tv_value(f, 1.0) == doctest::Approx(2.0 * std::sqrt(2.0) + 2.0).epsilon(1e-15));
  const Eigen::MatrixXd c = Eigen::MatrixXd::Constant(16, 16, 3.7);
  CHECK(tv_value(c, 0.01) == doctest::Approx(256 * 0.01).epsilon(1e-14));
  CHECK(tv_grad(c, 0.01).isZero(0.0));
  CHECK_THROWS_AS(tv_value(c, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(tv_grad(c, -1.0), std::invalid_argument);
}

TEST_CASE("TV gradient against central differences") {
  std::mt19937_64 rng(17);
  const Eigen::VectorXd v = random_vector(rng, 256, 0.0, 1.0);
  const Eigen::MatrixXd f = Eigen::Map<const Eigen::MatrixXd>(v.data(), 16, 16);
  const double delta = 0.05;
  const Eigen::MatrixXd g = tv_grad(f, delta);
  Eigen::MatrixXd fd(16, 16);
  const double step = 1e-6;
  for (Index i = 0; i < f.size(); ++i) {
    Eigen::MatrixXd a = f;
    Eigen::MatrixXd b = f;
    a.data()[i] += step;
    b.data()[i] -= step;
    fd.data()[i] = (tv_value(a, delta) - tv_value(b, delta)) / (2.0 * step);
  }
  CHECK((g - fd).norm() <= 1e-6 * g.norm());

  Eigen::MatrixXd acc = Eigen::MatrixXd::Ones(16, 16);
  const double val = tv_value_and_grad(f, delta, acc, 2.0);
  CHECK(val == doctest::Approx(tv_value(f, delta)));
  CHECK((acc - (Eigen::MatrixXd::Ones(16, 16) + 2.0 * g)).norm() <= 1e-12 * acc.norm());
}

TEST_CASE("TV midpoint convexity") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd a = random_vector(rng, 144);
    const Eigen::VectorXd b = random_vector(rng, 144);
    const Eigen::Map<const Eigen::MatrixXd> fa(a.data(), 12, 12);
    const Eigen::Map<const Eigen::MatrixXd> fb(b.data(), 12, 12);
    const Eigen::MatrixXd mid = 0.5 * (fa + fb);
    CHECK(tv_value(mid, 1e-3) <= 0.5 * (tv_value(fa, 1e-3) + tv_value(fb, 1e-3)) + 1e-12);
  }
}
