#include "roict/sgp.hpp"

namespace roict {

void SgpParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("sgp: beta must lie in (0,1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("sgp: backtracking factor must lie in (0,1)");
  }
  if (memory < 1) throw std::invalid_argument("sgp: nonmonotone memory must be >= 1");
  if (!(alpha_min > 0.0 && alpha_min < alpha_max)) {
    throw std::invalid_argument("sgp: need 0 < alpha_min < alpha_max");
  }
  if (!(sigma > 1.0)) throw std::invalid_argument("sgp: sigma must exceed 1");
  if (max_iter < 0) throw std::invalid_argument("sgp: max_iter must be non-negative");
  if (!(stop_tol >= 0.0)) throw std::invalid_argument("sgp: stop_tol must be non-negative");
  if (!(bb_switch_threshold > 0.0 && bb_switch_threshold < 1.0)) {
    throw std::invalid_argument("sgp: bb_switch_threshold must lie in (0,1)");
  }
  if (bb_memory < 1) throw std::invalid_argument("sgp: bb_memory must be >= 1");
  if (max_backtracks < 1) throw std::invalid_argument("sgp: max_backtracks must be >= 1");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Stationary: return "stationary";
    case Termination::MaxIter: return "max_iter";
    case Termination::Tolerance: return "tol";
  }
  return "unknown";
}

SteplengthSelector::SteplengthSelector(double threshold, int memory)
    : threshold_(threshold), memory_(static_cast<std::size_t>(std::max(memory, 1))) {}

double SteplengthSelector::select(const BbSteps& steps) {
  // Kept strictly inside (0, 1).
  constexpr double kLow = 1e-6;
  constexpr double kHigh = 1.0 - 1e-6;
  bb2_history_.push_back(steps.bb2);
  while (bb2_history_.size() > memory_) bb2_history_.pop_front();

  double alpha;
  if (steps.bb2 / steps.bb1 <= threshold_) {
    alpha = *std::min_element(bb2_history_.begin(), bb2_history_.end());
    threshold_ *= 0.9;
  } else {
    alpha = steps.bb1;
    threshold_ *= 1.1;
  }
  threshold_ = std::clamp(threshold_, kLow, kHigh);
  return alpha;
}

}  // namespace roict
