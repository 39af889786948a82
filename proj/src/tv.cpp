#include "roict/tv.hpp"

#include <cmath>
#include <stdexcept>

namespace roict {

namespace {
void check_delta(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("tv: delta must be positive");
}
}  // namespace

double tv_value(const Eigen::Ref<const Eigen::MatrixXd>& f, double delta) {
  check_delta(delta);
  const Index rows = f.rows();
  const Index cols = f.cols();
  const double d2 = delta * delta;
  double sum = 0.0;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double dx = j + 1 < cols ? f(i, j + 1) - f(i, j) : 0.0;
      const double dy = i + 1 < rows ? f(i + 1, j) - f(i, j) : 0.0;
      sum += std::sqrt(dx * dx + dy * dy + d2);
    }
  }
  return sum;
}

double tv_value_and_grad(const Eigen::Ref<const Eigen::MatrixXd>& f, double delta,
                         Eigen::Ref<Eigen::MatrixXd> grad, double scale) {
  check_delta(delta);
  if (grad.rows() != f.rows() || grad.cols() != f.cols()) {
    throw std::invalid_argument("tv: gradient shape mismatch");
  }
  const Index rows = f.rows();
  const Index cols = f.cols();
  const double d2 = delta * delta;
  double sum = 0.0;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const bool has_x = j + 1 < cols;
      const bool has_y = i + 1 < rows;
      const double dx = has_x ? f(i, j + 1) - f(i, j) : 0.0;
      const double dy = has_y ? f(i + 1, j) - f(i, j) : 0.0;
      const double mag = std::sqrt(dx * dx + dy * dy + d2);
      sum += mag;
      const double nx = scale * dx / mag;
      const double ny = scale * dy / mag;
      if (has_x) {
        grad(i, j + 1) += nx;
        grad(i, j) -= nx;
      }
      if (has_y) {
        grad(i + 1, j) += ny;
        grad(i, j) -= ny;
      }
    }
  }
  return sum;
}

ImageArray tv_grad(const Eigen::Ref<const Eigen::MatrixXd>& f, double delta) {
  ImageArray g = ImageArray::Zero(f.rows(), f.cols());
  tv_value_and_grad(f, delta, g);
  return g;
}

}  // namespace roict
