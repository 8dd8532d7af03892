// Command-line driver: synthetic dataset generation, planner runs, and the
// standalone frequency scorer.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nbv/dataset_io.hpp"
#include "nbv/image_io.hpp"
#include "nbv/planner.hpp"
#include "nbv/report.hpp"

namespace fs = std::filesystem;

namespace {

struct PlanArgs {
  std::string scene_path;
  std::string dataset_dir;
  std::string out_dir = "out";
  nbv::PlannerConfig cfg;
  std::string score_mode = "weighted-radial-median";
  std::string window = "none";
};

int cmd_generate(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = nbv::read_synthetic_config(config_path);
  fs::create_directories(out_dir);

  const nbv::Scene scene = nbv::generate_cluster_scene(cfg.n_gaussians, cfg.bounds_min,
                                                       cfg.bounds_max, cfg.seed);
  const nbv::Dataset ds = nbv::generate_orbit_dataset(cfg.n_views, cfg.n_orbits,
                                                      cfg.radius, cfg.target,
                                                      cfg.intrinsics, cfg.seed);
  nbv::write_scene(scene, fs::path(out_dir) / "scene.json");
  nbv::write_colmap_text(ds, fs::path(out_dir) / "cameras.txt",
                         fs::path(out_dir) / "images.txt");

  std::vector<nbv::Vec3> centers;
  for (const auto& v : ds.views) centers.push_back(nbv::camera_center(v));
  std::cout << "views: " << ds.views.size() << "\n"
            << "gaussians: " << scene.gaussians.size() << "\n"
            << "trajectory_length_full: " << nbv::trajectory_length(centers) << "\n";
  return 0;
}

int cmd_plan(const PlanArgs& args) {
  nbv::PlannerConfig cfg = args.cfg;
  cfg.proxy.noise_seed = cfg.seed;
  cfg.score.mode = args.score_mode == "magnitude-median"
                       ? nbv::ScoreMode::MagnitudeMedian
                       : nbv::ScoreMode::WeightedRadialMedian;
  cfg.score.window =
      args.window == "hann" ? nbv::WindowMode::Hann : nbv::WindowMode::None;

  std::cerr << "[plan] loading scene and dataset\n";
  const nbv::Scene truth = nbv::read_scene(args.scene_path);
  const nbv::Dataset ds = nbv::read_colmap_text(fs::path(args.dataset_dir) / "cameras.txt",
                                                fs::path(args.dataset_dir) / "images.txt");

  std::cerr << "[plan] running planner\n";
  nbv::RunReport report = nbv::run(ds, truth, cfg);
  {
    std::ostringstream echo;
    echo << "init_count=" << cfg.init_count << " budget=" << cfg.budget
         << " radius=" << cfg.radius << " widen_factor=" << cfg.widen_factor
         << " seed=" << cfg.seed << " blur_scale_base=" << cfg.proxy.blur_scale_base
         << " maturity_count=" << cfg.proxy.maturity_count
         << " score_mode=" << args.score_mode << " window=" << args.window;
    report.config_echo = echo.str();
  }

  fs::create_directories(args.out_dir);
  fs::create_directories(fs::path(args.out_dir) / "renders");
  nbv::write_report(report, fs::path(args.out_dir) / "report.json");
  nbv::write_scores_csv(report, fs::path(args.out_dir) / "scores.csv");

  std::cerr << "[plan] rendering selected views\n";
  const nbv::Scene truth_recon = nbv::transform_scene(cfg.frame_transform, truth);
  std::vector<int> visited_ids;
  for (const auto& v : ds.views)
    if (!nbv::is_test_view(v.id, cfg)) {
      if (static_cast<int>(visited_ids.size()) < cfg.init_count)
        visited_ids.push_back(v.id);
    }
  for (int id : report.selected_ids) visited_ids.push_back(id);
  std::vector<nbv::CameraView> visited_recon;
  for (int id : visited_ids)
    visited_recon.push_back(nbv::transform_view(cfg.frame_transform, ds.views[id]));
  const nbv::Scene model = nbv::build_model(truth_recon, visited_recon, cfg.proxy);
  for (int id : report.selected_ids) {
    const auto view = nbv::transform_view(cfg.frame_transform, ds.views[id]);
    char name[64];
    std::snprintf(name, sizeof(name), "selected_%05d.ppm", id);
    nbv::write_ppm(nbv::render(model, view), fs::path(args.out_dir) / "renders" / name);
  }

  const double ratio = report.trajectory_length_full > 0
                           ? report.trajectory_length_selected / report.trajectory_length_full
                           : 0.0;
  std::printf("distance_full     %.4f\n", report.trajectory_length_full);
  std::printf("distance_selected %.4f (%.1f%%)\n", report.trajectory_length_selected,
              100.0 * ratio);
  std::printf("psnr_mean %.4f\n", report.psnr_mean);
  std::printf("ssim_mean %.6f\n", report.ssim_mean);
  return 0;
}

int cmd_score(const std::string& input_dir, const std::string& out_dir,
              const std::string& score_mode, const std::string& window) {
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(input_dir))
    if (e.path().extension() == ".ppm") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    std::cerr << "error: no .ppm images in " << input_dir << "\n";
    return 2;
  }

  nbv::ScoreOptions opt;
  opt.mode = score_mode == "magnitude-median" ? nbv::ScoreMode::MagnitudeMedian
                                              : nbv::ScoreMode::WeightedRadialMedian;
  opt.window = window == "hann" ? nbv::WindowMode::Hann : nbv::WindowMode::None;

  fs::create_directories(out_dir);
  std::vector<std::pair<double, std::string>> results;
  for (const auto& p : paths) {
    const auto img = nbv::to_grayscale(nbv::read_ppm(p));
    double median = 0.0;
    nbv::SpectrumSummary s;
    try {
      s = nbv::score_view(img, opt);
      median = s.median_frequency;
    } catch (const nbv::ZeroSpectrum&) {
      median = 0.0;
    }
    results.emplace_back(median, p.filename().string());
    nbv::write_histogram_csv(
        s, fs::path(out_dir) / (p.stem().string() + "_spectrum.csv"));
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [median, name] : results)
    std::printf("%-40s %.6f\n", name.c_str(), median);
  std::printf("argmin: %s\n", results.front().second.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-based next-best-view selection for Gaussian splat scenes"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  auto* gen = app.add_subcommand("generate", "Generate a synthetic scene and orbit dataset");
  gen->add_option("--config", config_path, "Synthetic config JSON")->required();
  gen->add_option("--out-dir", out_dir, "Output directory");

  PlanArgs plan;
  auto* pl = app.add_subcommand("plan", "Run the next-best-view planner");
  pl->add_option("--scene", plan.scene_path, "Scene JSON")->required();
  pl->add_option("--dataset", plan.dataset_dir, "Directory with cameras.txt/images.txt")
      ->required();
  pl->add_option("--out-dir", plan.out_dir, "Output directory");
  pl->add_option("--init-count", plan.cfg.init_count, "Initial view count m");
  pl->add_option("--budget", plan.cfg.budget, "Total views to visit l");
  pl->add_option("--radius", plan.cfg.radius, "Candidate sampling radius");
  pl->add_option("--widen-factor", plan.cfg.widen_factor, "Radius growth on empty candidate set");
  pl->add_option("--seed", plan.cfg.seed, "Seed for all randomness");
  pl->add_option("--blur-scale-base", plan.cfg.proxy.blur_scale_base,
                 "Proxy covariance inflation base");
  pl->add_option("--maturity-count", plan.cfg.proxy.maturity_count,
                 "Observations for full proxy fidelity");
  pl->add_option("--score-mode", plan.score_mode,
                 "weighted-radial-median | magnitude-median");
  pl->add_option("--window", plan.window, "none | hann");

  std::string score_in, score_out = "score_out", score_mode = "weighted-radial-median",
              score_window = "none";
  auto* sc = app.add_subcommand("score", "Score a directory of PPM images by median frequency");
  sc->add_option("--input-dir", score_in, "Directory of .ppm images")->required();
  sc->add_option("--out-dir", score_out, "Directory for spectrum CSVs");
  sc->add_option("--score-mode", score_mode, "weighted-radial-median | magnitude-median");
  sc->add_option("--window", score_window, "none | hann");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(config_path, out_dir);
    if (pl->parsed()) return cmd_plan(plan);
    if (sc->parsed()) return cmd_score(score_in, score_out, score_mode, score_window);
  } catch (const nbv::ParseError& e) {
    std::cerr << "error [parse]: " << e.what() << "\n";
    return 1;
  } catch (const nbv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
