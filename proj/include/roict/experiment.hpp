#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "roict/frame.hpp"
#include "roict/geometry.hpp"
#include "roict/metrics.hpp"
#include "roict/objective.hpp"
#include "roict/projector.hpp"
#include "roict/roi.hpp"
#include "roict/sgp.hpp"

namespace roict {

enum class Regularizer { Shearlet, Wavelet, None };

std::string to_string(Regularizer r);
Regularizer parse_regularizer(const std::string& s);

/// λ = 5·10^ℓ for ℓ = −4 … 1.
std::vector<double> default_lambda_grid();
/// ρ ∈ {10⁻², 10⁻¹, 1}.
std::vector<double> default_rho_grid();

struct ExperimentConfig {
  FanBeamGeometry geometry = paper_geometry();
  Index n = 128;
  /// ROI centre as an offset from the isocenter in mm (x right, y up).
  Eigen::Vector2d roi_center_mm = Eigen::Vector2d::Zero();
  /// ROI radii γ as fractions of N (radius in pixels = frac · N).
  std::vector<double> gamma_fracs{0.5, 0.3, 0.15};
  std::vector<Formulation> formulations{Formulation::Implicit};
  std::vector<Regularizer> regularizers{Regularizer::Shearlet};
  std::vector<double> lambdas = default_lambda_grid();
  std::vector<double> rhos = default_rho_grid();
  double tv_delta = 1e-3;
  std::optional<double> upper_bound;
  int shearlet_scales = 3;
  FrameEvaluation frame_evaluation = FrameEvaluation::TightIdentity;
  SgpParams sgp;
  std::filesystem::path output_dir = "roict_out";
  std::uint64_t seed = 0;
  int threads = 1;
  /// When false the `seconds` column is written as 0 so reruns are
  /// byte-identical.
  bool record_seconds = true;
  bool write_images = true;

  void validate() const;
};

/// Reads every known key; unknown keys are rejected. Keys: geometry
/// ("paper" or an object with the geometry JSON keys), n, roi_center_mm,
/// roi_center_px, gamma_fracs, formulations, regularizers, lambdas, rhos,
/// tv_delta, upper_bound, shearlet_scales, frame_evaluation, sgp {…},
/// output_dir, seed, threads, record_seconds, write_images.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);

/// One point of the parameter grid.
struct CellSpec {
  double gamma_frac = 0.5;
  Formulation formulation = Formulation::Implicit;
  Regularizer regularizer = Regularizer::Shearlet;
  double lambda = 0.0;
  double rho = 0.0;

  std::string tag() const;
};

struct CellResult {
  CellSpec cell;
  MeritReport merit;
  int iterations = 0;
  double seconds = 0.0;
  Termination reason = Termination::MaxIter;
  ImageArray reconstruction;
  std::optional<Sinogram> sinogram;  // explicit formulation only
  std::vector<IterationRecord> log;
};

/// Read-only state shared by every cell of a sweep.
struct Scene {
  FanBeamGeometry geometry;
  ImageGrid grid;
  ImageArray truth;
  std::shared_ptr<const SystemMatrix> system;
  Eigen::VectorXd full_sinogram;  // y = W f_truth
  std::shared_ptr<const FrameOperator> shearlet;
  std::shared_ptr<const FrameOperator> wavelet;
};

/// Phantom, system matrix, simulated sinogram and frame operators.
Scene make_scene(const ExperimentConfig& config);

/// Expands the grid. Cells with the None regularizer get λ = 0 and are
/// deduplicated over the λ grid.
std::vector<CellSpec> expand_grid(const ExperimentConfig& config);

/// ROI disk for a cell (radius γ·N pixels).
RoiDisk cell_roi(const ExperimentConfig& config, const Scene& scene, double gamma_frac);

/// Builds the objective spec of one cell: mask, truncated data y₀ and Φ.
ObjectiveSpec make_objective_spec(const ExperimentConfig& config, const Scene& scene,
                                  const CellSpec& cell);

/// Simulates, truncates, solves and scores one cell. Monitors the ROI
/// relative error per iteration.
CellResult run_cell(const ExperimentConfig& config, const Scene& scene, const CellSpec& cell);

/// Runs the whole grid on `config.threads` workers, writes per-cell artifacts
/// and `summary.csv` (sorted by PSNR, best first) under output_dir.
std::vector<CellResult> run_experiment(const ExperimentConfig& config);

/// Summary table columns:
/// gamma_frac,formulation,regularizer,lambda,rho,psnr_db,rel_err,iters,seconds
std::string summary_csv(std::vector<CellResult> results, bool record_seconds);

/// Iteration log columns:
/// iter,psi,step_alpha,lambda_ls,backtracks,grad_norm,roi_rel_err
std::string iteration_log_csv(const std::vector<IterationRecord>& log);

}  // namespace roict
