// roict: phantom, projection, mask, reconstruction and sweep driver.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roict/experiment.hpp"
#include "roict/phantom.hpp"
#include "roict/projector.hpp"
#include "roict/raw_io.hpp"
#include "roict/render.hpp"
#include "roict/roi.hpp"

using namespace roict;

namespace {

struct GeometryArgs {
  std::string path;
  bool paper = false;

  void add(CLI::App* app) {
    auto* file = app->add_option("--geometry", path, "geometry JSON file");
    auto* flag = app->add_flag("--paper-geometry", paper, "use the built-in 182x130 geometry");
    file->excludes(flag);
  }
  std::optional<FanBeamGeometry> get() const {
    if (!path.empty()) return load_geometry(path);
    if (paper) return paper_geometry();
    return std::nullopt;
  }
};

// "X,Y" → two numbers.
Eigen::Vector2d parse_pair(const std::string& s) {
  double x = 0.0;
  double y = 0.0;
  char sep = 0;
  std::istringstream is(s);
  if (!(is >> x >> sep >> y) || sep != ',' || !is.eof()) {
    throw std::invalid_argument("expected X,Y but got '" + s + "'");
  }
  return {x, y};
}

struct RoiArgs {
  std::string center_px;
  std::string center_mm;
  std::optional<double> radius_px;
  std::optional<double> radius_mm;

  void add(CLI::App* app) {
    app->add_option("--roi-center-px", center_px, "ROI centre X,Y in pixels from the isocenter");
    app->add_option("--roi-center-mm", center_mm, "ROI centre X,Y in mm from the isocenter");
    app->add_option("--roi-radius-px", radius_px, "ROI radius in pixels");
    app->add_option("--roi-radius-mm", radius_mm, "ROI radius in mm");
  }
  RoiDisk get(double pixel_size_mm) const {
    RoiDisk roi;
    if (!center_mm.empty()) roi.center_mm = parse_pair(center_mm);
    if (!center_px.empty()) roi.center_mm = parse_pair(center_px) * pixel_size_mm;
    if (radius_mm) roi.radius_mm = *radius_mm;
    else if (radius_px) roi.radius_mm = *radius_px * pixel_size_mm;
    else throw std::invalid_argument("ROI radius required (--roi-radius-px or --roi-radius-mm)");
    if (!(roi.radius_mm > 0.0)) throw std::invalid_argument("ROI radius must be positive");
    return roi;
  }
};

// Flags shared by reconstruct and sweep; each one overrides the config key.
struct ConfigArgs {
  std::string config_path;
  GeometryArgs geometry;
  std::optional<Index> n;
  std::string roi_center_px;
  std::string roi_center_mm;
  std::optional<double> tv_delta;
  std::optional<double> upper_bound;
  std::optional<int> max_iter;
  std::optional<double> stop_tol;
  std::optional<int> scales;
  std::string frame_eval;
  bool poisson_noise = false;

  void add(CLI::App* app) {
    app->add_option("--config", config_path, "experiment JSON config");
    geometry.add(app);
    app->add_option("--n", n, "image size N");
    app->add_option("--roi-center-px", roi_center_px, "ROI centre X,Y in pixels");
    app->add_option("--roi-center-mm", roi_center_mm, "ROI centre X,Y in mm");
    app->add_option("--tv-delta", tv_delta, "TV smoothing delta");
    app->add_option("--upper-bound", upper_bound, "upper box bound on the image");
    app->add_option("--max-iter", max_iter, "SGP iteration cap");
    app->add_option("--stop-tol", stop_tol, "SGP relative step tolerance");
    app->add_option("--shearlet-scales", scales, "number of shearlet scales");
    app->add_option("--frame-eval", frame_eval, "tight|explicit");
    app->add_flag("--poisson-noise", poisson_noise, "reserved; not implemented");
  }

  ExperimentConfig build() const {
    if (poisson_noise) throw std::invalid_argument("--poisson-noise is not implemented");
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (auto g = geometry.get()) c.geometry = *g;
    if (n) c.n = *n;
    if (!roi_center_mm.empty()) c.roi_center_mm = parse_pair(roi_center_mm);
    if (!roi_center_px.empty()) {
      c.roi_center_mm = parse_pair(roi_center_px) * fov_pixel_size(c.geometry, c.n);
    }
    if (tv_delta) c.tv_delta = *tv_delta;
    if (upper_bound) c.upper_bound = *upper_bound;
    if (max_iter) c.sgp.max_iter = *max_iter;
    if (stop_tol) c.sgp.stop_tol = *stop_tol;
    if (scales) c.shearlet_scales = *scales;
    if (frame_eval == "tight") c.frame_evaluation = FrameEvaluation::TightIdentity;
    else if (frame_eval == "explicit") c.frame_evaluation = FrameEvaluation::ExplicitOperator;
    else if (!frame_eval.empty()) throw std::invalid_argument("--frame-eval must be tight or explicit");
    return c;
  }
};

void print_summary(const std::vector<CellResult>& results, bool record_seconds) {
  std::cout << summary_csv(results, record_seconds);
}

int run(int argc, char** argv) {
  CLI::App app{"ROI CT reconstruction from truncated fan-beam projections"};
  app.require_subcommand(1);

  // phantom
  auto* phantom = app.add_subcommand("phantom", "write the modified Shepp-Logan phantom");
  Index ph_n = 128;
  std::string ph_out;
  std::string ph_png;
  phantom->add_option("--n", ph_n, "image size")->required();
  phantom->add_option("--out", ph_out, "raw f64 output")->required();
  phantom->add_option("--png", ph_png, "PNG rendering");
  phantom->callback([&] {
    const ImageArray img = generate_phantom(ph_n);
    write_raw_image(ph_out, img);
    if (!ph_png.empty()) write_png(ph_png, render_range(img, 0.0, 1.0));
  });

  // project
  auto* project = app.add_subcommand("project", "forward-project an image");
  GeometryArgs pr_geometry;
  std::string pr_image;
  std::string pr_out;
  std::string pr_matrix;
  std::string pr_png;
  pr_geometry.add(project);
  project->add_option("--image", pr_image, "raw f64 N x N image")->required();
  project->add_option("--out", pr_out, "raw f64 K x P sinogram")->required();
  project->add_option("--matrix", pr_matrix, "dump the system matrix triplets");
  project->add_option("--png", pr_png, "PNG rendering of the sinogram");
  project->callback([&] {
    const auto g = pr_geometry.get();
    if (!g) throw std::invalid_argument("--geometry or --paper-geometry required");
    const ImageArray img = read_raw_image(pr_image);
    if (img.rows() != img.cols()) throw std::invalid_argument("image must be square");
    const SystemMatrix w = assemble(*g, img.rows());
    const Sinogram sino = as_sinogram(w.apply(flat(img)), g->num_views, g->num_cells);
    write_raw(pr_out, sino);
    if (!pr_matrix.empty()) write_system_matrix(w, pr_matrix);
    if (!pr_png.empty()) write_png(pr_png, render(sino));
  });

  // mask
  auto* mask = app.add_subcommand("mask", "build the projection mask of a disk ROI");
  GeometryArgs mk_geometry;
  RoiArgs mk_roi;
  Index mk_n = 128;
  std::string mk_out;
  std::string mk_png;
  mk_geometry.add(mask);
  mk_roi.add(mask);
  mask->add_option("--n", mk_n, "image size used for pixel units");
  mask->add_option("--out", mk_out, "raw f64 K x P mask")->required();
  mask->add_option("--png", mk_png, "PNG of the mask with boundary overlay");
  mask->callback([&] {
    const FanBeamGeometry g = mk_geometry.get().value_or(paper_geometry());
    const RoiDisk roi = mk_roi.get(fov_pixel_size(g, mk_n));
    const ProjectionMask m = build_mask(g, roi);
    write_raw(mk_out, m.as_sinogram());
    if (!mk_png.empty()) {
      Gray8 img = render_range(ImageArray(m.as_sinogram()) * 0.5, 0.0, 1.0);
      overlay_mask_boundary(img, m);
      write_png(mk_png, img);
    }
    std::cout << "masked_samples," << m.count() << '\n';
  });

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "solve a single grid cell");
  ConfigArgs rc_args;
  double rc_gamma = 0.5;
  std::string rc_formulation;
  std::string rc_regularizer;
  std::optional<double> rc_lambda;
  std::optional<double> rc_rho;
  std::string rc_out;
  std::string rc_log;
  std::string rc_png;
  std::string rc_sino;
  rc_args.add(recon);
  recon->add_option("--gamma", rc_gamma, "ROI radius as a fraction of N");
  recon->add_option("--formulation", rc_formulation, "implicit|explicit");
  recon->add_option("--regularizer", rc_regularizer, "shearlet|wavelet|none");
  recon->add_option("--lambda", rc_lambda, "frame penalty weight");
  recon->add_option("--rho", rc_rho, "TV weight");
  recon->add_option("--out", rc_out, "raw f64 reconstruction")->required();
  recon->add_option("--log", rc_log, "iteration log CSV");
  recon->add_option("--png", rc_png, "PNG with ROI overlay");
  recon->add_option("--sino-out", rc_sino, "raw f64 recovered sinogram (explicit)");
  recon->callback([&] {
    ExperimentConfig c = rc_args.build();
    CellSpec cell;
    cell.gamma_frac = rc_gamma;
    cell.formulation = rc_formulation.empty() ? c.formulations.front() : parse_formulation(rc_formulation);
    cell.regularizer = rc_regularizer.empty() ? c.regularizers.front() : parse_regularizer(rc_regularizer);
    cell.lambda = rc_lambda.value_or(c.lambdas.front());
    cell.rho = rc_rho.value_or(c.rhos.front());
    if (cell.regularizer == Regularizer::None) cell.lambda = 0.0;
    c.gamma_fracs = {cell.gamma_frac};
    c.formulations = {cell.formulation};
    c.regularizers = {cell.regularizer};
    c.lambdas = {cell.lambda};
    c.rhos = {cell.rho};
    c.validate();
    const Scene scene = make_scene(c);
    const CellResult r = run_cell(c, scene, cell);
    write_raw_image(rc_out, r.reconstruction);
    if (!rc_log.empty()) {
      std::ofstream(rc_log) << iteration_log_csv(r.log);
    }
    if (!rc_png.empty()) {
      Gray8 img = render_range(r.reconstruction, 0.0, 1.0);
      overlay_roi_circle(img, scene.grid, cell_roi(c, scene, cell.gamma_frac));
      write_png(rc_png, img);
    }
    if (!rc_sino.empty()) {
      if (!r.sinogram) throw std::invalid_argument("--sino-out needs the explicit formulation");
      write_raw(rc_sino, *r.sinogram);
    }
    print_summary({r}, c.record_seconds);
  });

  // metrics
  auto* metrics = app.add_subcommand("metrics", "score a reconstruction inside the ROI");
  std::string mt_recon;
  std::string mt_truth;
  RoiArgs mt_roi;
  std::optional<double> mt_pixel;
  std::optional<double> mt_mpv;
  metrics->add_option("--recon", mt_recon, "raw f64 reconstruction")->required();
  metrics->add_option("--truth", mt_truth, "raw f64 ground truth")->required();
  mt_roi.add(metrics);
  metrics->add_option("--pixel-size-mm", mt_pixel, "pixel size (default: paper geometry FOV)");
  metrics->add_option("--mpv", mt_mpv, "peak value (default: truth maximum)");
  metrics->callback([&] {
    const ImageArray a = read_raw_image(mt_recon);
    const ImageArray b = read_raw_image(mt_truth);
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
      throw std::invalid_argument("recon and truth must be equal-size square arrays");
    }
    const ImageGrid grid{a.rows(), mt_pixel.value_or(fov_pixel_size(paper_geometry(), a.rows()))};
    const auto pixels = roi_pixels(grid, mt_roi.get(grid.pixel_size_mm));
    const MeritReport m = evaluate_roi(a, b, pixels, mt_mpv.value_or(-1.0));
    std::printf("psnr_db,rel_err,roi_pixels\n%.10g,%.10g,%lld\n", m.psnr_db, m.rel_err,
                static_cast<long long>(m.roi_pixel_count));
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run the full parameter grid");
  ConfigArgs sw_args;
  std::string sw_out_dir;
  std::optional<int> sw_threads;
  std::vector<double> sw_gammas;
  std::vector<std::string> sw_forms;
  std::vector<std::string> sw_regs;
  std::vector<double> sw_lambdas;
  std::vector<double> sw_rhos;
  bool sw_no_images = false;
  bool sw_no_seconds = false;
  sw_args.add(sweep);
  sweep->add_option("--out-dir", sw_out_dir, "output directory");
  sweep->add_option("--threads", sw_threads, "worker threads");
  sweep->add_option("--gammas", sw_gammas, "ROI radii as fractions of N")->delimiter(',');
  sweep->add_option("--formulations", sw_forms, "implicit,explicit")->delimiter(',');
  sweep->add_option("--regularizers", sw_regs, "shearlet,wavelet,none")->delimiter(',');
  sweep->add_option("--lambdas", sw_lambdas, "lambda grid")->delimiter(',');
  sweep->add_option("--rhos", sw_rhos, "rho grid")->delimiter(',');
  sweep->add_flag("--no-images", sw_no_images, "skip PNG output");
  sweep->add_flag("--no-seconds", sw_no_seconds, "write 0 in the seconds column");
  sweep->callback([&] {
    ExperimentConfig c = sw_args.build();
    if (!sw_out_dir.empty()) c.output_dir = sw_out_dir;
    if (sw_threads) c.threads = *sw_threads;
    if (!sw_gammas.empty()) c.gamma_fracs = sw_gammas;
    if (!sw_forms.empty()) {
      c.formulations.clear();
      for (const auto& f : sw_forms) c.formulations.push_back(parse_formulation(f));
    }
    if (!sw_regs.empty()) {
      c.regularizers.clear();
      for (const auto& r : sw_regs) c.regularizers.push_back(parse_regularizer(r));
    }
    if (!sw_lambdas.empty()) c.lambdas = sw_lambdas;
    if (!sw_rhos.empty()) c.rhos = sw_rhos;
    if (sw_no_images) c.write_images = false;
    if (sw_no_seconds) c.record_seconds = false;
    print_summary(run_experiment(c), c.record_seconds);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "roict: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "roict: " << e.what() << '\n';
    return 1;
  }
}
