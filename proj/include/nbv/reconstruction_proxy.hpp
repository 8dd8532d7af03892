#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "nbv/core_types.hpp"
#include "nbv/splat_renderer.hpp"

namespace nbv {

/// Portable uniform double in [0, 1) from a splitmix64 stream; avoids the
/// implementation-defined std::uniform_real_distribution.
class DeterministicRng {
 public:
  explicit DeterministicRng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform in [-1, 1].
  double next_signed() { return 2.0 * next_unit() - 1.0; }

 private:
  uint64_t state_;
};

struct ObservationRecord {
  int gaussian_index = 0;
  int observation_count = 0;
  std::optional<int> first_observed_step;
};

struct ProxyConfig {
  double blur_scale_base = 4.0;  // covariance inflation for unobserved Gaussians
  int maturity_count = 3;        // observations needed for full fidelity
  double opacity_floor = 0.3;
  uint64_t noise_seed = 0;
  double noise_amplitude = 0.1;
};

/// A Gaussian counts as observed when its projected mean falls inside the
/// image rectangle expanded by 3 sigma of its 2D footprint.
inline bool visibility(const Gaussian3D& g, const CameraView& view) {
  const auto s = project_gaussian(g, view);
  if (!s) return false;
  const Eigen::SelfAdjointEigenSolver<Mat2> eig(s->cov2d);
  const double margin = 3.0 * std::sqrt(eig.eigenvalues().maxCoeff());
  return s->mean2d.x() >= -margin && s->mean2d.x() <= view.width - 1 + margin &&
         s->mean2d.y() >= -margin && s->mean2d.y() <= view.height - 1 + margin;
}

inline std::vector<ObservationRecord> count_observations(
    const Scene& truth, const std::vector<CameraView>& visited) {
  std::vector<ObservationRecord> records(truth.gaussians.size());
  for (size_t i = 0; i < truth.gaussians.size(); ++i) {
    records[i].gaussian_index = static_cast<int>(i);
    for (size_t v = 0; v < visited.size(); ++v) {
      if (visibility(truth.gaussians[i], visited[v])) {
        ++records[i].observation_count;
        if (!records[i].first_observed_step)
          records[i].first_observed_step = static_cast<int>(v);
      }
    }
  }
  return records;
}

/// Training stand-in: each Gaussian's fidelity follows its observation count.
/// Under-observed Gaussians render inflated, faint and color-perturbed;
/// fully mature ones reproduce the truth exactly.
inline Scene build_model(const Scene& truth, const std::vector<CameraView>& visited,
                         const ProxyConfig& cfg) {
  const auto records = count_observations(truth, visited);
  Scene out = truth;
  for (size_t i = 0; i < out.gaussians.size(); ++i) {
    auto& g = out.gaussians[i];
    const double maturity = std::min(
        static_cast<double>(records[i].observation_count) / cfg.maturity_count, 1.0);
    const double raw = 1.0 - maturity;
    g.scale *= std::pow(cfg.blur_scale_base, raw);
    g.opacity *= std::max(maturity, cfg.opacity_floor);
    if (raw > 0.0) {
      DeterministicRng rng(cfg.noise_seed * 0x2545F4914F6CDD1DULL + i + 1);
      for (int c = 0; c < 3; ++c)
        g.color(c) = std::clamp(
            g.color(c) + raw * cfg.noise_amplitude * rng.next_signed(), 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace nbv
