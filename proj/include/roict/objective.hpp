#pragma once

#include <memory>
#include <optional>
#include <string>

#include "roict/frame.hpp"
#include "roict/projector.hpp"
#include "roict/roi.hpp"
#include "roict/types.hpp"

namespace roict {

enum class Formulation { Implicit, Explicit };

/// How λ‖Φz‖² and its gradient are evaluated. For a Parseval frame both
/// give the same numbers; TightIdentity skips the transforms.
enum class FrameEvaluation { TightIdentity, ExplicitOperator };

std::string to_string(Formulation f);
Formulation parse_formulation(const std::string& s);

struct ObjectiveSpec {
  Formulation formulation = Formulation::Implicit;
  double lambda = 0.0;
  double rho = 0.0;
  double delta = 1e-3;
  /// Upper pixel bound L; the feasible set is 0 ≤ f (≤ L).
  std::optional<double> upper_bound;

  std::shared_ptr<const SystemMatrix> system;
  std::shared_ptr<const ProjectionMask> mask;
  /// Truncated sinogram, flat with index k·P + p.
  Eigen::VectorXd y0;
  /// Φ; may be null when lambda == 0.
  std::shared_ptr<const FrameOperator> frame;
  FrameEvaluation frame_evaluation = FrameEvaluation::TightIdentity;

  void validate() const;
};

namespace detail {

/// Shared machinery of both formulations.
class ObjectiveBase {
 public:
  explicit ObjectiveBase(ObjectiveSpec spec);

  const ObjectiveSpec& spec() const { return spec_; }
  Index image_size() const { return spec_.system->cols(); }
  Index sinogram_size() const { return spec_.system->rows(); }
  /// Leading entries that receive the diagonal scaling of SGP (the image).
  Index scaled_size() const { return image_size(); }

  /// ‖Φz‖²; when `gram` is given it receives Φᵀ Φ z.
  double frame_penalty(const Eigen::VectorXd& z, Eigen::VectorXd* gram) const;

 protected:
  void project_image(Eigen::Ref<Eigen::VectorXd> f) const;
  bool image_feasible(const Eigen::Ref<const Eigen::VectorXd>& f) const;
  double tv_term(const Eigen::Ref<const Eigen::VectorXd>& f,
                 Eigen::Ref<Eigen::VectorXd> grad) const;

  ObjectiveSpec spec_;
  const Eigen::VectorXd& m() const { return spec_.mask->values; }
  Eigen::VectorXd complement_;  // 1 − M
};

}  // namespace detail

/// Ψ(f) = ½‖MWf − y₀‖² + λ‖Φ((I − M)Wf + y₀)‖² + ρ TV_δ(f).
class ImplicitObjective : public detail::ObjectiveBase {
 public:
  explicit ImplicitObjective(ObjectiveSpec spec);

  Index size() const { return image_size(); }

  double value(const Eigen::VectorXd& f) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& f) const;
  double value_and_gradient(const Eigen::VectorXd& f, Eigen::VectorXd& grad) const;

  void project(Eigen::Ref<Eigen::VectorXd> x) const { project_image(x); }
  bool feasible(const Eigen::VectorXd& x) const { return image_feasible(x); }
};

/// Ψ(f, y) = ½‖MWf − y₀‖² + ½‖(I − M)(Wf − y)‖² + λ‖Φ((I − M)y + y₀)‖² + ρ TV_δ(f)
/// over the stacked variable x = [f; y].
class ExplicitObjective : public detail::ObjectiveBase {
 public:
  explicit ExplicitObjective(ObjectiveSpec spec);

  Index size() const { return image_size() + sinogram_size(); }

  Eigen::VectorXd stack(const Eigen::VectorXd& f, const Eigen::VectorXd& y) const;
  Eigen::VectorXd image_part(const Eigen::VectorXd& x) const { return x.head(image_size()); }
  Eigen::VectorXd sinogram_part(const Eigen::VectorXd& x) const {
    return x.tail(sinogram_size());
  }

  double value(const Eigen::VectorXd& f, const Eigen::VectorXd& y) const;
  /// (g_f, g_y) stacked like the variable.
  Eigen::VectorXd gradient(const Eigen::VectorXd& f, const Eigen::VectorXd& y) const;

  double value(const Eigen::VectorXd& x) const;
  double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const;

  /// f onto Ω_f, y onto y ≥ 0.
  void project(Eigen::Ref<Eigen::VectorXd> x) const;
  bool feasible(const Eigen::VectorXd& x) const;
};

}  // namespace roict
