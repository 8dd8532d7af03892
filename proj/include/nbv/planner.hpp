#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "nbv/core_types.hpp"
#include "nbv/dataset_io.hpp"
#include "nbv/frequency_scorer.hpp"
#include "nbv/metrics.hpp"
#include "nbv/reconstruction_proxy.hpp"
#include "nbv/registration.hpp"
#include "nbv/splat_renderer.hpp"

namespace nbv {

/// No unvisited views remain; the run ends early but cleanly.
struct Exhausted : Error {
  using Error::Error;
};

struct PlannerConfig {
  int init_count = 10;      // m: views taken as initialization
  int budget = 100;         // l: total views to visit
  double radius = 2.5;      // candidate sampling radius, world units
  double widen_factor = 1.5;
  ProxyConfig proxy;
  ScoreOptions score;
  /// Harness frame: the reconstruction lives in frame_transform(dataset frame).
  /// Identity makes both frames coincide; anything else exercises registration.
  SimilarityTransform frame_transform;
  int test_split_every = 8;  // every k-th view held out; 0 disables the split
  double pose_noise_translation = 0.0;  // jitter on registration targets
  uint64_t seed = 0;
};

struct PlannerState {
  std::vector<int> visited;   // visit order, initialization first
  int current_pose_id = -1;   // last element of visited
  std::vector<int> selected;  // planner-chosen ids, in selection order
  int step = 0;
  std::optional<SimilarityTransform> registration;
};

inline bool is_test_view(int id, const PlannerConfig& cfg) {
  return cfg.test_split_every > 0 && id % cfg.test_split_every == 0;
}

/// Unvisited views whose dataset-frame centers lie within r of the current
/// view's center, ascending by id.
inline std::vector<int> sample_candidates(const PlannerState& state,
                                          const std::vector<CameraView>& all_views,
                                          double r) {
  const Vec3 here = camera_center(all_views[state.current_pose_id]);
  std::vector<int> out;
  for (const auto& v : all_views) {
    if (std::find(state.visited.begin(), state.visited.end(), v.id) !=
        state.visited.end())
      continue;
    if ((camera_center(v) - here).norm() <= r) out.push_back(v.id);
  }
  return out;
}

namespace detail {

inline std::vector<Vec3> noisy_recon_targets(const PlannerState& state,
                                             const Dataset& dataset,
                                             const PlannerConfig& cfg) {
  std::vector<Vec3> targets;
  targets.reserve(state.visited.size());
  for (int id : state.visited) {
    Vec3 p = apply(cfg.frame_transform, camera_center(dataset.views[id]));
    if (cfg.pose_noise_translation > 0.0) {
      DeterministicRng rng((cfg.seed + 1) * 0x9E3779B97F4A7C15ULL +
                           static_cast<uint64_t>(state.step) * 0x100000001B3ULL +
                           static_cast<uint64_t>(id));
      for (int a = 0; a < 3; ++a)
        p(a) += cfg.pose_noise_translation * rng.next_signed();
    }
    targets.push_back(p);
  }
  return targets;
}

inline std::vector<int> eligible_ids(const PlannerState& state, const Dataset& dataset,
                                     const PlannerConfig& cfg) {
  std::vector<int> out;
  for (const auto& v : dataset.views) {
    if (is_test_view(v.id, cfg)) continue;
    if (std::find(state.visited.begin(), state.visited.end(), v.id) !=
        state.visited.end())
      continue;
    out.push_back(v.id);
  }
  return out;
}

inline void advance(PlannerState& state, int chosen) {
  state.visited.push_back(chosen);
  state.selected.push_back(chosen);
  state.current_pose_id = chosen;
  ++state.step;
}

}  // namespace detail

/// One greedy iteration: register visited poses into the reconstruction frame,
/// rebuild the proxy model, score the candidates within radius (widening until
/// some exist), and visit the one with the lowest median frequency.
inline StepReport plan_step(PlannerState& state, const Dataset& dataset,
                            const Scene& truth_recon, const PlannerConfig& cfg) {
  const auto eligible = detail::eligible_ids(state, dataset, cfg);
  if (eligible.empty()) throw Exhausted("plan_step: no unvisited views remain");

  StepReport report;
  report.step = state.step;

  SimilarityTransform registration;
  const auto targets = detail::noisy_recon_targets(state, dataset, cfg);
  std::vector<Vec3> sources;
  sources.reserve(state.visited.size());
  for (int id : state.visited) sources.push_back(camera_center(dataset.views[id]));
  try {
    registration = umeyama(sources, targets);
    report.registration_rmsd = registration_rmsd(registration, sources, targets);
  } catch (const DegenerateInput&) {
    // fallback: nearest unvisited view by dataset-frame distance, unscored
    const Vec3 here = camera_center(dataset.views[state.current_pose_id]);
    int best = eligible.front();
    double best_d = (camera_center(dataset.views[best]) - here).norm();
    for (int id : eligible) {
      const double d = (camera_center(dataset.views[id]) - here).norm();
      if (d < best_d) {
        best_d = d;
        best = id;
      }
    }
    report.fallback = true;
    report.chosen_id = best;
    detail::advance(state, best);
    return report;
  }
  state.registration = registration;

  std::vector<CameraView> visited_recon;
  visited_recon.reserve(state.visited.size());
  for (int id : state.visited)
    visited_recon.push_back(transform_view(registration, dataset.views[id]));
  const Scene model = build_model(truth_recon, visited_recon, cfg.proxy);

  double r = cfg.radius;
  std::vector<int> candidates;
  for (;;) {
    candidates = sample_candidates(state, dataset.views, r);
    std::erase_if(candidates, [&](int id) { return is_test_view(id, cfg); });
    if (!candidates.empty()) break;
    r *= cfg.widen_factor;
    ++report.widen_count;
  }

  std::vector<std::pair<int, SpectrumSummary>> scores;
  for (int id : candidates) {
    const CameraView view_c = transform_view(registration, dataset.views[id]);
    const ImageBuffer img = render_grayscale(model, view_c);
    SpectrumSummary s;
    try {
      s = score_view(img, cfg.score);
    } catch (const ZeroSpectrum&) {
      s.median_frequency = 0.0;  // constant render: minimal information
    }
    scores.emplace_back(id, s);
    report.candidates.push_back({id, s.median_frequency});
  }

  report.chosen_id = rank_candidates(scores);
  detail::advance(state, report.chosen_id);
  return report;
}

/// Full greedy loop: initialize with the first init_count usable views in
/// dataset order, iterate plan_step until the budget is spent or the dataset
/// is exhausted, then evaluate on the held-out test split.
inline RunReport run(const Dataset& dataset, const Scene& truth,
                     const PlannerConfig& cfg) {
  std::vector<int> usable, test_ids;
  for (const auto& v : dataset.views)
    (is_test_view(v.id, cfg) ? test_ids : usable).push_back(v.id);
  if (static_cast<int>(usable.size()) < cfg.init_count)
    throw Error("run: dataset smaller than init_count");

  const Scene truth_recon = transform_scene(cfg.frame_transform, truth);

  PlannerState state;
  for (int i = 0; i < cfg.init_count; ++i) state.visited.push_back(usable[i]);
  state.current_pose_id = state.visited.back();

  RunReport report;
  report.completion = "budget";
  while (static_cast<int>(state.visited.size()) < cfg.budget) {
    try {
      report.per_step.push_back(plan_step(state, dataset, truth_recon, cfg));
    } catch (const Exhausted&) {
      report.completion = "exhausted";
      break;
    }
  }
  report.selected_ids = state.selected;

  std::vector<Vec3> visited_centers, full_centers;
  for (int id : state.visited) visited_centers.push_back(camera_center(dataset.views[id]));
  for (int id : usable) full_centers.push_back(camera_center(dataset.views[id]));
  report.trajectory_length_selected = trajectory_length(visited_centers);
  report.trajectory_length_full = trajectory_length(full_centers);

  // final model quality on the held-out split, in the reconstruction frame
  std::vector<CameraView> visited_recon, test_recon;
  for (int id : state.visited)
    visited_recon.push_back(transform_view(cfg.frame_transform, dataset.views[id]));
  for (int id : test_ids)
    test_recon.push_back(transform_view(cfg.frame_transform, dataset.views[id]));
  const Scene final_model = build_model(truth_recon, visited_recon, cfg.proxy);
  report = evaluate(std::move(report), truth_recon, final_model, test_recon);
  return report;
}

}  // namespace nbv
