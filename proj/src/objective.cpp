#include "roict/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "roict/tv.hpp"

namespace roict {

std::string to_string(Formulation f) {
  return f == Formulation::Implicit ? "implicit" : "explicit";
}

Formulation parse_formulation(const std::string& s) {
  if (s == "implicit") return Formulation::Implicit;
  if (s == "explicit") return Formulation::Explicit;
  throw std::invalid_argument("unknown formulation '" + s + "'");
}

void ObjectiveSpec::validate() const {
  if (!system || !mask) throw std::invalid_argument("objective: system matrix and mask required");
  if (!(lambda >= 0.0) || !(rho >= 0.0)) throw std::invalid_argument("objective: negative weight");
  if (!(delta > 0.0)) throw std::invalid_argument("objective: delta must be positive");
  if (upper_bound && !(*upper_bound > 0.0)) {
    throw std::invalid_argument("objective: upper bound must be positive");
  }
  if (mask->size() != system->rows() || y0.size() != system->rows()) {
    throw std::invalid_argument("objective: mask or data size differs from system rows");
  }
  if (lambda > 0.0) {
    if (!frame) throw std::invalid_argument("objective: lambda > 0 requires a frame operator");
    if (frame->rows() != system->num_views() || frame->cols() != system->num_cells()) {
      throw std::invalid_argument("objective: frame shape differs from the sinogram");
    }
  }
}

namespace detail {

ObjectiveBase::ObjectiveBase(ObjectiveSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  complement_ = Eigen::VectorXd::Ones(spec_.mask->size()) - spec_.mask->values;
}

double ObjectiveBase::frame_penalty(const Eigen::VectorXd& z, Eigen::VectorXd* gram) const {
  if (spec_.lambda == 0.0 || !spec_.frame ||
      spec_.frame_evaluation == FrameEvaluation::TightIdentity) {
    if (gram) *gram = z;
    return z.squaredNorm();
  }
  const Sinogram zs = as_sinogram(z, spec_.system->num_views(), spec_.system->num_cells());
  const CoeffSet c = spec_.frame->forward(zs);
  if (gram) {
    const Sinogram back = spec_.frame->adjoint(c);
    *gram = flat(back);
  }
  return squared_norm(c);
}

void ObjectiveBase::project_image(Eigen::Ref<Eigen::VectorXd> f) const {
  const double hi = spec_.upper_bound.value_or(std::numeric_limits<double>::infinity());
  f = f.cwiseMax(0.0).cwiseMin(hi);
}

bool ObjectiveBase::image_feasible(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != image_size()) return false;
  if (!(f.array() >= 0.0).all()) return false;
  if (spec_.upper_bound && !(f.array() <= *spec_.upper_bound).all()) return false;
  return true;
}

double ObjectiveBase::tv_term(const Eigen::Ref<const Eigen::VectorXd>& f,
                              Eigen::Ref<Eigen::VectorXd> grad) const {
  if (spec_.rho == 0.0) return 0.0;
  const Index n = spec_.system->grid().n;
  const Eigen::Map<const Eigen::MatrixXd> img(f.data(), n, n);
  Eigen::Map<Eigen::MatrixXd> g(grad.data(), n, n);
  return spec_.rho * tv_value_and_grad(img, spec_.delta, g, spec_.rho);
}

}  // namespace detail

ImplicitObjective::ImplicitObjective(ObjectiveSpec spec) : ObjectiveBase(std::move(spec)) {}

double ImplicitObjective::value(const Eigen::VectorXd& f) const {
  if (f.size() != size()) throw std::invalid_argument("implicit objective: image size mismatch");
  const Eigen::VectorXd wf = spec_.system->apply(f);
  const Eigen::VectorXd fit = m().cwiseProduct(wf) - spec_.y0;
  const Eigen::VectorXd z = complement_.cwiseProduct(wf) + spec_.y0;
  double psi = 0.5 * fit.squaredNorm();
  if (spec_.lambda != 0.0) psi += spec_.lambda * frame_penalty(z, nullptr);
  if (spec_.rho != 0.0) {
    const Index n = spec_.system->grid().n;
    psi += spec_.rho * tv_value(Eigen::Map<const Eigen::MatrixXd>(f.data(), n, n), spec_.delta);
  }
  return psi;
}

double ImplicitObjective::value_and_gradient(const Eigen::VectorXd& f,
                                             Eigen::VectorXd& grad) const {
  if (f.size() != size()) throw std::invalid_argument("implicit objective: image size mismatch");
  const Eigen::VectorXd wf = spec_.system->apply(f);
  Eigen::VectorXd residual = m().cwiseProduct(wf) - spec_.y0;
  double psi = 0.5 * residual.squaredNorm();
  // Wᵀ M (MWf − y₀) + 2λ Wᵀ (I − M) ΦᵀΦ ((I − M)Wf + y₀)
  Eigen::VectorXd back = m().cwiseProduct(residual);
  if (spec_.lambda != 0.0) {
    const Eigen::VectorXd z = complement_.cwiseProduct(wf) + spec_.y0;
    Eigen::VectorXd gram;
    psi += spec_.lambda * frame_penalty(z, &gram);
    back += 2.0 * spec_.lambda * complement_.cwiseProduct(gram);
  }
  grad = spec_.system->apply_adjoint(back);
  psi += tv_term(f, grad);
  return psi;
}

Eigen::VectorXd ImplicitObjective::gradient(const Eigen::VectorXd& f) const {
  Eigen::VectorXd g;
  value_and_gradient(f, g);
  return g;
}

ExplicitObjective::ExplicitObjective(ObjectiveSpec spec) : ObjectiveBase(std::move(spec)) {}

Eigen::VectorXd ExplicitObjective::stack(const Eigen::VectorXd& f, const Eigen::VectorXd& y) const {
  if (f.size() != image_size() || y.size() != sinogram_size()) {
    throw std::invalid_argument("explicit objective: block size mismatch");
  }
  Eigen::VectorXd x(size());
  x << f, y;
  return x;
}

double ExplicitObjective::value(const Eigen::VectorXd& f, const Eigen::VectorXd& y) const {
  return value(stack(f, y));
}

Eigen::VectorXd ExplicitObjective::gradient(const Eigen::VectorXd& f,
                                            const Eigen::VectorXd& y) const {
  Eigen::VectorXd g;
  value_and_gradient(stack(f, y), g);
  return g;
}

double ExplicitObjective::value(const Eigen::VectorXd& x) const {
  if (x.size() != size()) throw std::invalid_argument("explicit objective: variable size mismatch");
  const auto f = x.head(image_size());
  const auto y = x.tail(sinogram_size());
  const Eigen::VectorXd wf = spec_.system->apply(f);
  const Eigen::VectorXd fit = m().cwiseProduct(wf) - spec_.y0;
  const Eigen::VectorXd consistency = complement_.cwiseProduct(wf - y);
  double psi = 0.5 * fit.squaredNorm() + 0.5 * consistency.squaredNorm();
  if (spec_.lambda != 0.0) {
    const Eigen::VectorXd z = complement_.cwiseProduct(y) + spec_.y0;
    psi += spec_.lambda * frame_penalty(z, nullptr);
  }
  if (spec_.rho != 0.0) {
    const Index n = spec_.system->grid().n;
    psi += spec_.rho * tv_value(Eigen::Map<const Eigen::MatrixXd>(f.data(), n, n), spec_.delta);
  }
  return psi;
}

double ExplicitObjective::value_and_gradient(const Eigen::VectorXd& x,
                                             Eigen::VectorXd& grad) const {
  if (x.size() != size()) throw std::invalid_argument("explicit objective: variable size mismatch");
  const auto f = x.head(image_size());
  const auto y = x.tail(sinogram_size());
  const Eigen::VectorXd wf = spec_.system->apply(f);
  const Eigen::VectorXd fit = m().cwiseProduct(wf) - spec_.y0;
  const Eigen::VectorXd consistency = complement_.cwiseProduct(wf - y);
  double psi = 0.5 * fit.squaredNorm() + 0.5 * consistency.squaredNorm();

  grad.resize(size());
  // g_f = Wᵀ [M(MWf − y₀) + (I − M)(Wf − y)] + ρ ∇TV
  const Eigen::VectorXd back = m().cwiseProduct(fit) + consistency;
  grad.head(image_size()) = spec_.system->apply_adjoint(back);
  // g_y = −(I − M)(Wf − y) + 2λ (I − M) ΦᵀΦ ((I − M)y + y₀)
  grad.tail(sinogram_size()) = -consistency;
  if (spec_.lambda != 0.0) {
    const Eigen::VectorXd z = complement_.cwiseProduct(y) + spec_.y0;
    Eigen::VectorXd gram;
    psi += spec_.lambda * frame_penalty(z, &gram);
    grad.tail(sinogram_size()) += 2.0 * spec_.lambda * complement_.cwiseProduct(gram);
  }
  psi += tv_term(f, grad.head(image_size()));
  return psi;
}

void ExplicitObjective::project(Eigen::Ref<Eigen::VectorXd> x) const {
  project_image(x.head(image_size()));
  x.tail(sinogram_size()) = x.tail(sinogram_size()).cwiseMax(0.0);
}

bool ExplicitObjective::feasible(const Eigen::VectorXd& x) const {
  if (x.size() != size()) return false;
  return image_feasible(x.head(image_size())) && (x.tail(sinogram_size()).array() >= 0.0).all();
}

}  // namespace roict
