#include "roict/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "roict/phantom.hpp"
#include "roict/raw_io.hpp"
#include "roict/render.hpp"
#include "roict/shearlet.hpp"
#include "roict/wavelet.hpp"

namespace roict {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

template <typename T, typename Parse>
std::vector<T> one_or_many(const nlohmann::json& j, Parse parse) {
  std::vector<T> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(parse(e));
  } else {
    out.push_back(parse(j));
  }
  return out;
}

SgpParams sgp_from_json(const nlohmann::json& j, SgpParams p) {
  static const std::set<std::string> known{"beta",     "backtrack",  "memory",   "alpha_min",
                                           "alpha_max", "alpha0",    "sigma",    "max_iter",
                                           "stop_tol", "bb_switch_threshold", "bb_memory",
                                           "max_backtracks"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("config: unknown sgp key '" + key + "'");
  }
  p.beta = j.value("beta", p.beta);
  p.backtrack = j.value("backtrack", p.backtrack);
  p.memory = j.value("memory", p.memory);
  p.alpha_min = j.value("alpha_min", p.alpha_min);
  p.alpha_max = j.value("alpha_max", p.alpha_max);
  p.alpha0 = j.value("alpha0", p.alpha0);
  p.sigma = j.value("sigma", p.sigma);
  p.max_iter = j.value("max_iter", p.max_iter);
  p.stop_tol = j.value("stop_tol", p.stop_tol);
  p.bb_switch_threshold = j.value("bb_switch_threshold", p.bb_switch_threshold);
  p.bb_memory = j.value("bb_memory", p.bb_memory);
  p.max_backtracks = j.value("max_backtracks", p.max_backtracks);
  return p;
}

}  // namespace

std::string to_string(Regularizer r) {
  switch (r) {
    case Regularizer::Shearlet: return "shearlet";
    case Regularizer::Wavelet: return "wavelet";
    case Regularizer::None: return "none";
  }
  return "unknown";
}

Regularizer parse_regularizer(const std::string& s) {
  if (s == "shearlet") return Regularizer::Shearlet;
  if (s == "wavelet") return Regularizer::Wavelet;
  if (s == "none") return Regularizer::None;
  throw std::invalid_argument("unknown regularizer '" + s + "'");
}

std::vector<double> default_lambda_grid() {
  std::vector<double> out;
  for (int l = -4; l <= 1; ++l) out.push_back(5.0 * std::pow(10.0, l));
  return out;
}

std::vector<double> default_rho_grid() { return {1e-2, 1e-1, 1.0}; }

void ExperimentConfig::validate() const {
  geometry.validate();
  if (n < 2) throw std::invalid_argument("config: n must be at least 2");
  if (gamma_fracs.empty() || formulations.empty() || regularizers.empty() || lambdas.empty() ||
      rhos.empty()) {
    throw std::invalid_argument("config: parameter grids must be non-empty");
  }
  for (double g : gamma_fracs) {
    if (!(g > 0.0)) throw std::invalid_argument("config: gamma must be positive");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw std::invalid_argument("config: lambda must be non-negative");
  }
  for (double r : rhos) {
    if (!(r >= 0.0)) throw std::invalid_argument("config: rho must be non-negative");
  }
  if (!(tv_delta > 0.0)) throw std::invalid_argument("config: tv_delta must be positive");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  sgp.validate();
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{
      "geometry",  "n",        "roi_center_mm",   "roi_center_px", "gamma_fracs",
      "formulations", "regularizers", "lambdas",  "rhos",          "tv_delta",
      "upper_bound", "shearlet_scales", "frame_evaluation", "sgp",  "output_dir",
      "seed",      "threads",  "record_seconds",  "write_images"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  try {
    ExperimentConfig c;
    if (j.contains("geometry")) {
      const auto& g = j.at("geometry");
      if (g.is_string()) {
        if (g.get<std::string>() != "paper") {
          throw std::invalid_argument("config: geometry must be \"paper\" or an object");
        }
        c.geometry = paper_geometry();
      } else {
        c.geometry = geometry_from_json(g.dump());
      }
    }
    c.n = j.value("n", c.n);
    if (j.contains("roi_center_mm")) {
      const auto v = j.at("roi_center_mm").get<std::vector<double>>();
      if (v.size() != 2) throw std::invalid_argument("config: roi_center_mm needs two values");
      c.roi_center_mm = {v[0], v[1]};
    }
    if (j.contains("roi_center_px")) {
      const auto v = j.at("roi_center_px").get<std::vector<double>>();
      if (v.size() != 2) throw std::invalid_argument("config: roi_center_px needs two values");
      c.roi_center_mm = Eigen::Vector2d(v[0], v[1]) * fov_pixel_size(c.geometry, c.n);
    }
    if (j.contains("gamma_fracs")) {
      c.gamma_fracs = one_or_many<double>(j.at("gamma_fracs"), [](const auto& e) { return e.template get<double>(); });
    }
    if (j.contains("formulations")) {
      c.formulations = one_or_many<Formulation>(
          j.at("formulations"), [](const auto& e) { return parse_formulation(e.template get<std::string>()); });
    }
    if (j.contains("regularizers")) {
      c.regularizers = one_or_many<Regularizer>(
          j.at("regularizers"), [](const auto& e) { return parse_regularizer(e.template get<std::string>()); });
    }
    if (j.contains("lambdas")) {
      c.lambdas = one_or_many<double>(j.at("lambdas"), [](const auto& e) { return e.template get<double>(); });
    }
    if (j.contains("rhos")) {
      c.rhos = one_or_many<double>(j.at("rhos"), [](const auto& e) { return e.template get<double>(); });
    }
    c.tv_delta = j.value("tv_delta", c.tv_delta);
    if (j.contains("upper_bound") && !j.at("upper_bound").is_null()) {
      c.upper_bound = j.at("upper_bound").get<double>();
    }
    c.shearlet_scales = j.value("shearlet_scales", c.shearlet_scales);
    if (j.contains("frame_evaluation")) {
      const auto s = j.at("frame_evaluation").get<std::string>();
      if (s == "tight") {
        c.frame_evaluation = FrameEvaluation::TightIdentity;
      } else if (s == "explicit") {
        c.frame_evaluation = FrameEvaluation::ExplicitOperator;
      } else {
        throw std::invalid_argument("config: frame_evaluation must be tight or explicit");
      }
    }
    if (j.contains("sgp")) c.sgp = sgp_from_json(j.at("sgp"), c.sgp);
    c.output_dir = j.value("output_dir", c.output_dir.string());
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.record_seconds = j.value("record_seconds", c.record_seconds);
    c.write_images = j.value("write_images", c.write_images);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  return config_from_json(nlohmann::json::parse(in));
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["geometry"] = nlohmann::json::parse(geometry_to_json(c.geometry));
  j["n"] = c.n;
  j["roi_center_mm"] = {c.roi_center_mm.x(), c.roi_center_mm.y()};
  j["gamma_fracs"] = c.gamma_fracs;
  std::vector<std::string> forms;
  for (auto f : c.formulations) forms.push_back(to_string(f));
  j["formulations"] = forms;
  std::vector<std::string> regs;
  for (auto r : c.regularizers) regs.push_back(to_string(r));
  j["regularizers"] = regs;
  j["lambdas"] = c.lambdas;
  j["rhos"] = c.rhos;
  j["tv_delta"] = c.tv_delta;
  j["upper_bound"] = c.upper_bound ? nlohmann::json(*c.upper_bound) : nlohmann::json(nullptr);
  j["shearlet_scales"] = c.shearlet_scales;
  j["frame_evaluation"] =
      c.frame_evaluation == FrameEvaluation::TightIdentity ? "tight" : "explicit";
  j["sgp"] = {{"beta", c.sgp.beta},
              {"backtrack", c.sgp.backtrack},
              {"memory", c.sgp.memory},
              {"alpha_min", c.sgp.alpha_min},
              {"alpha_max", c.sgp.alpha_max},
              {"alpha0", c.sgp.alpha0},
              {"sigma", c.sgp.sigma},
              {"max_iter", c.sgp.max_iter},
              {"stop_tol", c.sgp.stop_tol},
              {"bb_switch_threshold", c.sgp.bb_switch_threshold},
              {"bb_memory", c.sgp.bb_memory},
              {"max_backtracks", c.sgp.max_backtracks}};
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["record_seconds"] = c.record_seconds;
  j["write_images"] = c.write_images;
  return j;
}

std::string CellSpec::tag() const {
  return "g" + fmt(gamma_frac) + "_" + to_string(formulation) + "_" + to_string(regularizer) +
         "_l" + fmt(lambda) + "_r" + fmt(rho);
}

Scene make_scene(const ExperimentConfig& config) {
  Scene s;
  s.geometry = config.geometry;
  s.grid = ImageGrid{config.n, fov_pixel_size(config.geometry, config.n)};
  s.truth = generate_phantom(config.n);
  s.system = std::make_shared<const SystemMatrix>(assemble(config.geometry, s.grid));
  s.full_sinogram = s.system->apply(flat(s.truth));
  const auto uses = [&](Regularizer r) {
    return std::find(config.regularizers.begin(), config.regularizers.end(), r) !=
           config.regularizers.end();
  };
  if (uses(Regularizer::Shearlet)) {
    s.shearlet = std::make_shared<const ShearletSystem>(
        config.geometry.num_views, config.geometry.num_cells, config.shearlet_scales);
  }
  if (uses(Regularizer::Wavelet)) {
    s.wavelet = std::make_shared<const UndecimatedWavelet>(config.geometry.num_views,
                                                           config.geometry.num_cells);
  }
  return s;
}

std::vector<CellSpec> expand_grid(const ExperimentConfig& config) {
  std::vector<CellSpec> cells;
  for (double g : config.gamma_fracs) {
    for (auto form : config.formulations) {
      for (auto reg : config.regularizers) {
        const std::vector<double> lambdas =
            reg == Regularizer::None ? std::vector<double>{0.0} : config.lambdas;
        for (double l : lambdas) {
          for (double r : config.rhos) cells.push_back({g, form, reg, l, r});
        }
      }
    }
  }
  return cells;
}

RoiDisk cell_roi(const ExperimentConfig& config, const Scene& scene, double gamma_frac) {
  const double radius_px = gamma_frac * static_cast<double>(config.n);
  return RoiDisk{config.roi_center_mm, radius_px * scene.grid.pixel_size_mm};
}

ObjectiveSpec make_objective_spec(const ExperimentConfig& config, const Scene& scene,
                                  const CellSpec& cell) {
  ObjectiveSpec spec;
  spec.formulation = cell.formulation;
  spec.lambda = cell.regularizer == Regularizer::None ? 0.0 : cell.lambda;
  spec.rho = cell.rho;
  spec.delta = config.tv_delta;
  spec.upper_bound = config.upper_bound;
  spec.system = scene.system;
  auto mask = std::make_shared<ProjectionMask>(
      build_mask(scene.geometry, cell_roi(config, scene, cell.gamma_frac)));
  spec.y0 = truncate(scene.full_sinogram, *mask);
  spec.mask = std::move(mask);
  switch (cell.regularizer) {
    case Regularizer::Shearlet: spec.frame = scene.shearlet; break;
    case Regularizer::Wavelet: spec.frame = scene.wavelet; break;
    case Regularizer::None: break;
  }
  spec.frame_evaluation = config.frame_evaluation;
  return spec;
}

CellResult run_cell(const ExperimentConfig& config, const Scene& scene, const CellSpec& cell) {
  const auto start = std::chrono::steady_clock::now();
  const ObjectiveSpec spec = make_objective_spec(config, scene, cell);
  const auto pixels = roi_pixels(scene.grid, cell_roi(config, scene, cell.gamma_frac));
  const Index image_size = scene.grid.n * scene.grid.n;
  const ImageArray& truth = scene.truth;
  const IterationMonitor monitor = [&](const Eigen::VectorXd& x) {
    return rel_err_roi(x.head(image_size), flat(truth), pixels);
  };

  CellResult out;
  out.cell = cell;
  SolveResult solve;
  if (cell.formulation == Formulation::Implicit) {
    const ImplicitObjective objective(spec);
    solve = sgp_solve(objective, config.sgp, Eigen::VectorXd::Zero(objective.size()), monitor);
  } else {
    const ExplicitObjective objective(spec);
    const Eigen::VectorXd x0 = objective.stack(Eigen::VectorXd::Zero(image_size), spec.y0);
    solve = sgp_solve(objective, config.sgp, x0, monitor);
    out.sinogram = as_sinogram(solve.x.tail(objective.sinogram_size()),
                               scene.geometry.num_views, scene.geometry.num_cells);
  }
  out.reconstruction = as_image(solve.x.head(image_size), scene.grid.n);
  out.merit = evaluate_roi(out.reconstruction, truth, pixels, truth.maxCoeff());
  out.iterations = solve.iterations;
  out.reason = solve.reason;
  out.log = std::move(solve.log);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string iteration_log_csv(const std::vector<IterationRecord>& log) {
  std::ostringstream os;
  os << "iter,psi,step_alpha,lambda_ls,backtracks,grad_norm,roi_rel_err\n";
  for (const auto& r : log) {
    os << r.iter << ',' << fmt(r.psi) << ',' << fmt(r.step_alpha) << ',' << fmt(r.lambda_ls)
       << ',' << r.backtracks << ',' << fmt(r.grad_norm) << ','
       << (std::isnan(r.monitor) ? std::string() : fmt(r.monitor)) << '\n';
  }
  return os.str();
}

std::string summary_csv(std::vector<CellResult> results, bool record_seconds) {
  std::stable_sort(results.begin(), results.end(), [](const CellResult& a, const CellResult& b) {
    if (a.merit.psnr_db != b.merit.psnr_db) return a.merit.psnr_db > b.merit.psnr_db;
    return a.cell.tag() < b.cell.tag();
  });
  std::ostringstream os;
  os << "gamma_frac,formulation,regularizer,lambda,rho,psnr_db,rel_err,iters,seconds\n";
  for (const auto& r : results) {
    os << fmt(r.cell.gamma_frac) << ',' << to_string(r.cell.formulation) << ','
       << to_string(r.cell.regularizer) << ',' << fmt(r.cell.lambda) << ',' << fmt(r.cell.rho)
       << ',' << fmt(r.merit.psnr_db) << ',' << fmt(r.merit.rel_err) << ',' << r.iterations
       << ',' << (record_seconds ? fmt(r.seconds) : std::string("0")) << '\n';
  }
  return os.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_cell_artifacts(const ExperimentConfig& config, const Scene& scene,
                          const CellResult& r) {
  const auto base = config.output_dir / r.cell.tag();
  write_raw_image(base.string() + "_recon.f64", r.reconstruction);
  write_text(base.string() + "_log.csv", iteration_log_csv(r.log));
  const RoiDisk roi = cell_roi(config, scene, r.cell.gamma_frac);
  if (r.sinogram) write_raw(base.string() + "_sino.f64", *r.sinogram);
  if (!config.write_images) return;
  Gray8 img = render_range(r.reconstruction, 0.0, 1.0);
  overlay_roi_circle(img, scene.grid, roi);
  write_png(base.string() + "_recon.png", img);
  if (r.sinogram) {
    Gray8 sino = render(*r.sinogram);
    overlay_mask_boundary(sino, build_mask(scene.geometry, roi));
    write_png(base.string() + "_sino.png", sino);
  }
}

}  // namespace

std::vector<CellResult> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    throw std::runtime_error("cannot create output directory " + config.output_dir.string());
  }
  {
    const auto probe = config.output_dir / ".roict_write_probe";
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory not writable: " + config.output_dir.string());
    out.close();
    std::filesystem::remove(probe, ec);
  }

  const Scene scene = make_scene(config);
  const std::vector<CellSpec> cells = expand_grid(config);
  std::vector<CellResult> results(cells.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      try {
        results[idx] = run_cell(config, scene, cells[idx]);
        write_cell_artifacts(config, scene, results[idx]);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(config.threads, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  write_text(config.output_dir / "summary.csv", summary_csv(results, config.record_seconds));
  return results;
}

}  // namespace roict
