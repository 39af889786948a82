#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace roict {

/// Parameters of the scaled gradient projection method.
struct SgpParams {
  double beta = 1e-4;          // Armijo sufficient-decrease parameter
  double backtrack = 0.4;      // step reduction factor in the line search
  int memory = 10;             // nonmonotone window μ; μ = 1 is monotone Armijo
  double alpha_min = 1e-10;
  double alpha_max = 1e5;
  double alpha0 = 1.3;
  double sigma = 1e6;          // scaling entries live in [1/σ, σ]
  int max_iter = 7000;
  double stop_tol = 1e-7;      // ‖z − x‖ ≤ stop_tol · max(1, ‖x‖)
  double bb_switch_threshold = 0.15;
  int bb_memory = 3;
  int max_backtracks = 50;

  void validate() const;
};

enum class Termination { Stationary, MaxIter, Tolerance };

std::string to_string(Termination t);

struct IterationRecord {
  int iter = 0;
  double psi = 0.0;         // Ψ at the accepted iterate
  double psi_ref = 0.0;     // nonmonotone reference Ψ_max
  double step_alpha = 0.0;
  double lambda_ls = 0.0;
  int backtracks = 0;
  double grad_norm = 0.0;   // ‖∇Ψ‖ at the iterate the step started from
  double grad_dot_dir = 0.0;
  double dir_norm = 0.0;
  double scale_min = 0.0;
  double scale_max = 0.0;
  double monitor = std::numeric_limits<double>::quiet_NaN();
};

struct SolveResult {
  Eigen::VectorXd x;  // final iterate (the stacked [f; y] in explicit mode)
  int iterations = 0;
  double initial_psi = 0.0;
  double final_psi = 0.0;
  Termination reason = Termination::MaxIter;
  std::vector<IterationRecord> log;
};

/// Optional per-iteration quantity recorded in IterationRecord::monitor,
/// e.g. the ROI relative error against a known ground truth.
using IterationMonitor = std::function<double(const Eigen::VectorXd&)>;

/// Componentwise clamp onto [lower, upper].
template <typename Derived>
void project_box(Eigen::DenseBase<Derived>& x, double lower,
                 std::optional<double> upper = std::nullopt) {
  if (upper && *upper < lower) {
    throw std::invalid_argument("project_box: upper bound below lower bound");
  }
  const double hi = upper.value_or(std::numeric_limits<double>::infinity());
  x.derived() = x.derived().cwiseMax(lower).cwiseMin(hi);
}

/// Diagonal scaling d_i = min{σ, max{1/σ, x_i}} on the first `scaled_size`
/// entries and 1 on the rest.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> update_scaling(
    const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar sigma,
    Eigen::Index scaled_size = -1) {
  using Scalar = typename Derived::Scalar;
  if (!(sigma > Scalar(1))) throw std::invalid_argument("update_scaling: sigma must exceed 1");
  if (scaled_size < 0) scaled_size = x.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(x.size());
  d.head(scaled_size) = x.head(scaled_size).cwiseMax(Scalar(1) / sigma).cwiseMin(sigma);
  return d;
}

struct BbSteps {
  double bb1;
  double bb2;
};

/// Barzilai–Borwein steplengths for B(α) = (αD)⁻¹:
///   α_BB1 = sᵀD⁻¹D⁻¹s / sᵀD⁻¹ζ,   α_BB2 = sᵀDζ / ζᵀDDζ,
/// falling back to α_max / α_min on non-positive or non-finite
/// denominators and to α_max when sᵀDζ ≤ 0, then clamped to [α_min, α_max].
template <typename DerivedS, typename DerivedZ, typename DerivedD>
BbSteps bb_steplengths(const Eigen::MatrixBase<DerivedS>& s,
                       const Eigen::MatrixBase<DerivedZ>& zeta,
                       const Eigen::MatrixBase<DerivedD>& d, double alpha_min,
                       double alpha_max) {
  const auto s_over_d = s.cwiseQuotient(d);
  const auto d_zeta = d.cwiseProduct(zeta);
  const double den1 = s_over_d.dot(zeta);
  const double den2 = d_zeta.squaredNorm();

  double bb1 = alpha_max;
  if (den1 > 0.0 && std::isfinite(den1)) {
    bb1 = s_over_d.squaredNorm() / den1;
    if (!std::isfinite(bb1)) bb1 = alpha_max;
  }
  double bb2 = alpha_min;
  if (den2 > 0.0 && std::isfinite(den2)) {
    const double num2 = s.dot(d_zeta);
    // Non-positive curvature along s under D: same safeguard as BB1.
    bb2 = num2 > 0.0 ? num2 / den2 : alpha_max;
    if (!std::isfinite(bb2)) bb2 = alpha_min;
  }
  return {std::clamp(bb1, alpha_min, alpha_max), std::clamp(bb2, alpha_min, alpha_max)};
}

/// Adaptive alternation between the two BB rules: when α_BB2/α_BB1 falls
/// under a variable threshold τ, the minimum of the last m_a BB2 values is
/// used and τ shrinks by 0.9; otherwise α_BB1 is used and τ grows by 1.1.
class SteplengthSelector {
 public:
  SteplengthSelector(double threshold, int memory);

  double select(const BbSteps& steps);
  double threshold() const { return threshold_; }

 private:
  double threshold_;
  std::size_t memory_;
  std::deque<double> bb2_history_;
};

/// Requirements on a problem handed to sgp_solve.
template <typename P>
concept SgpProblem = requires(const P& p, const Eigen::VectorXd& x, Eigen::VectorXd& g,
                              Eigen::Ref<Eigen::VectorXd> xr) {
  { p.size() } -> std::convertible_to<Eigen::Index>;
  { p.scaled_size() } -> std::convertible_to<Eigen::Index>;
  { p.value_and_gradient(x, g) } -> std::convertible_to<double>;
  { p.feasible(x) } -> std::convertible_to<bool>;
  p.project(xr);
};

/// Scaled gradient projection with BB steplength alternation and a
/// nonmonotone Armijo backtracking line search:
///
///   z = P(x − α D ∇Ψ(x)),  d = z − x,
///   accept x + λd once Ψ(x + λd) ≤ max_{last μ} Ψ + β λ ∇Ψᵀd.
///
/// Throws std::invalid_argument for an infeasible start or a non-finite
/// initial objective and std::runtime_error when the line search needs more
/// than `max_backtracks` reductions.
template <SgpProblem P>
SolveResult sgp_solve(const P& problem, const SgpParams& params, Eigen::VectorXd x0,
                      const IterationMonitor& monitor = {}) {
  params.validate();
  if (x0.size() != problem.size()) throw std::invalid_argument("sgp_solve: start has wrong size");
  if (!problem.feasible(x0)) throw std::invalid_argument("sgp_solve: start is infeasible");

  SolveResult result;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd grad(x.size());
  double psi = problem.value_and_gradient(x, grad);
  if (!std::isfinite(psi)) throw std::invalid_argument("sgp_solve: objective not finite at start");
  result.initial_psi = psi;

  std::deque<double> history{psi};
  SteplengthSelector selector(params.bb_switch_threshold, params.bb_memory);
  double alpha = std::clamp(params.alpha0, params.alpha_min, params.alpha_max);

  Eigen::VectorXd s, zeta, z, dir, trial, trial_grad(x.size());
  result.reason = Termination::MaxIter;

  for (int k = 0; k < params.max_iter; ++k) {
    const Eigen::VectorXd scaling = update_scaling(x, params.sigma, problem.scaled_size());
    if (k > 0) {
      alpha = selector.select(bb_steplengths(s, zeta, scaling, params.alpha_min, params.alpha_max));
    }

    z = x - alpha * scaling.cwiseProduct(grad);
    problem.project(z);
    dir = z - x;
    const double dir_norm = dir.norm();
    if (dir_norm == 0.0) {
      result.reason = Termination::Stationary;
      break;
    }
    if (dir_norm <= params.stop_tol * std::max(1.0, x.norm())) {
      result.reason = Termination::Tolerance;
      break;
    }

    const double grad_dot_dir = grad.dot(dir);
    const double psi_ref = *std::max_element(history.begin(), history.end());

    double lambda = 1.0;
    int backtracks = 0;
    double psi_new = 0.0;
    for (;;) {
      trial = x + lambda * dir;
      psi_new = problem.value_and_gradient(trial, trial_grad);
      // Difference form: Ψ_ref + βλ∇Ψᵀd would round back to Ψ_ref once λ is tiny.
      if (psi_new - psi_ref <= params.beta * lambda * grad_dot_dir) break;
      if (++backtracks > params.max_backtracks) {
        throw std::runtime_error("sgp_solve: line search failed after " +
                                 std::to_string(params.max_backtracks) +
                                 " reductions (inconsistent gradient?)");
      }
      lambda *= params.backtrack;
    }

    IterationRecord rec;
    rec.iter = k;
    rec.psi = psi_new;
    rec.psi_ref = psi_ref;
    rec.step_alpha = alpha;
    rec.lambda_ls = lambda;
    rec.backtracks = backtracks;
    rec.grad_norm = grad.norm();
    rec.grad_dot_dir = grad_dot_dir;
    rec.dir_norm = dir_norm;
    rec.scale_min = scaling.minCoeff();
    rec.scale_max = scaling.maxCoeff();

    s = trial - x;
    zeta = trial_grad - grad;
    x.swap(trial);
    grad.swap(trial_grad);
    psi = psi_new;

    history.push_back(psi);
    while (history.size() > static_cast<std::size_t>(params.memory)) history.pop_front();

    if (monitor) rec.monitor = monitor(x);
    result.log.push_back(rec);
    ++result.iterations;
  }

  result.x = std::move(x);
  result.final_psi = psi;
  return result;
}

/// Un-regularized SGP used as an iterative regularization method: stopping
/// is governed only by `max_iter` (or exact stationarity). The monitor is
/// where the semi-convergence curve gets recorded.
template <SgpProblem P>
SolveResult early_stopped_solve(const P& problem, SgpParams params, Eigen::VectorXd x0,
                                const IterationMonitor& monitor = {}) {
  if constexpr (requires { problem.spec().lambda; problem.spec().rho; }) {
    if (problem.spec().lambda != 0.0 || problem.spec().rho != 0.0) {
      throw std::invalid_argument("early_stopped_solve: objective must be un-regularized");
    }
  }
  params.stop_tol = 0.0;
  return sgp_solve(problem, params, std::move(x0), monitor);
}

}  // namespace roict
