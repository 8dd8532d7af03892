#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nbv/core_types.hpp"
#include "nbv/frequency_scorer.hpp"
#include "nbv/splat_renderer.hpp"

namespace nbv {

inline constexpr double kPsnrCap = 99.0;  // dB, stands in for +inf

/// Peak signal-to-noise ratio on [0,1] images, MSE over all channels.
inline double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels)
    throw DimensionMismatch("psnr: image dimensions differ");
  double mse = 0.0;
  for (size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.pixels.size());
  if (mse < 1e-12) return kPsnrCap;
  return 10.0 * std::log10(1.0 / mse);
}

namespace detail {

inline std::vector<double> ssim_window() {
  // 11x11 Gaussian weights, sigma = 1.5, normalized
  std::vector<double> w(121);
  double sum = 0.0;
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 11; ++x) {
      const double dx = x - 5.0, dy = y - 5.0;
      w[y * 11 + x] = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
      sum += w[y * 11 + x];
    }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace detail

/// Mean local SSIM, 11x11 Gaussian window sigma 1.5, C1=0.01^2, C2=0.03^2 on
/// the [0,1] range. RGB inputs go through luma first. Windows fully inside the
/// image only.
inline double ssim(const ImageBuffer& a_in, const ImageBuffer& b_in) {
  if (a_in.width != b_in.width || a_in.height != b_in.height ||
      a_in.channels != b_in.channels)
    throw DimensionMismatch("ssim: image dimensions differ");
  if (a_in.width < 11 || a_in.height < 11)
    throw ImageTooSmall("ssim: need at least 11x11 pixels");

  const ImageBuffer a = to_grayscale(a_in);
  const ImageBuffer b = to_grayscale(b_in);
  static const std::vector<double> win = detail::ssim_window();
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;

  double acc = 0.0;
  int count = 0;
  for (int y = 0; y + 11 <= a.height; ++y) {
    for (int x = 0; x + 11 <= a.width; ++x) {
      double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
      for (int wy = 0; wy < 11; ++wy) {
        for (int wx = 0; wx < 11; ++wx) {
          const double w = win[wy * 11 + wx];
          const double va = a.at(x + wx, y + wy);
          const double vb = b.at(x + wx, y + wy);
          mu_a += w * va;
          mu_b += w * vb;
          aa += w * va * va;
          bb += w * vb * vb;
          ab += w * va * vb;
        }
      }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      acc += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
             ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      ++count;
    }
  }
  return acc / count;
}

/// Open-path length: sum of Euclidean distances between consecutive centers.
inline double trajectory_length(const std::vector<Vec3>& centers) {
  double len = 0.0;
  for (size_t i = 1; i < centers.size(); ++i)
    len += (centers[i] - centers[i - 1]).norm();
  return len;
}

struct CandidateScore {
  int view_id = 0;
  double median_frequency = 0.0;
};

struct StepReport {
  int step = 0;
  std::vector<CandidateScore> candidates;  // ordered by view id
  int chosen_id = -1;
  double registration_rmsd = 0.0;
  bool fallback = false;  // nearest-view fallback after degenerate registration
  int widen_count = 0;    // radius widenings needed to find candidates
};

struct RunReport {
  std::vector<int> selected_ids;
  std::vector<StepReport> per_step;
  double psnr_mean = 0.0;
  double ssim_mean = 0.0;
  std::optional<double> lpips_mean;  // reserved, never computed here
  double trajectory_length_selected = 0.0;
  double trajectory_length_full = 0.0;
  std::string config_echo;
  std::string completion;  // "budget" or "exhausted"
};

/// Fills the report's image-quality fields from truth-vs-proxy renders over
/// the test views.
inline RunReport evaluate(RunReport run, const Scene& truth, const Scene& proxy,
                          const std::vector<CameraView>& test_views) {
  double psnr_acc = 0.0, ssim_acc = 0.0;
  for (const auto& view : test_views) {
    const ImageBuffer ref = render(truth, view);
    const ImageBuffer est = render(proxy, view);
    psnr_acc += psnr(ref, est);
    ssim_acc += ssim(ref, est);
  }
  if (!test_views.empty()) {
    run.psnr_mean = psnr_acc / static_cast<double>(test_views.size());
    run.ssim_mean = ssim_acc / static_cast<double>(test_views.size());
  }
  return run;
}

}  // namespace nbv
