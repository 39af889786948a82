#include "roict/frame.hpp"

#include <stdexcept>

namespace roict {

double squared_norm(const CoeffSet& c) {
  double s = 0.0;
  for (const auto& band : c) s += band.squaredNorm();
  return s;
}

void FrameOperator::check_shape(const Sinogram& x) const {
  if (x.rows() != rows() || x.cols() != cols()) {
    throw std::invalid_argument(name() + ": input shape mismatch");
  }
}

}  // namespace roict
