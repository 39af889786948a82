#pragma once

#include <string>
#include <vector>

#include "roict/types.hpp"

namespace roict {

/// One real coefficient array per analysis band.
using CoeffSet = std::vector<Eigen::MatrixXd>;

double squared_norm(const CoeffSet& c);

/// Analysis operator Φ acting on K×P sinogram arrays, with its adjoint Φᵀ.
/// Both implementations below are Parseval frames: Φᵀ Φ = I.
class FrameOperator {
 public:
  virtual ~FrameOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual Index num_bands() const = 0;
  virtual std::string name() const = 0;

  virtual CoeffSet forward(const Sinogram& x) const = 0;
  virtual Sinogram adjoint(const CoeffSet& c) const = 0;

  /// Φᵀ Φ x, evaluated through the operators.
  Sinogram gram(const Sinogram& x) const { return adjoint(forward(x)); }

 protected:
  void check_shape(const Sinogram& x) const;
};

}  // namespace roict
