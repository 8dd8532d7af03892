#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "nbv/core_types.hpp"
#include "nbv/fft.hpp"

namespace nbv {

/// Constant image: no spectral energy to take a median over.
struct ZeroSpectrum : Error {
  using Error::Error;
};
struct EmptyCandidates : Error {
  using Error::Error;
};

enum class ScoreMode { WeightedRadialMedian, MagnitudeMedian };
enum class WindowMode { None, Hann };

struct ScoreOptions {
  int radial_bins = 64;
  ScoreMode mode = ScoreMode::WeightedRadialMedian;
  WindowMode window = WindowMode::None;
};

/// Radial frequency support: signed frequencies live in [-0.5, 0.5) per axis.
inline constexpr double kMaxRadialFrequency = 0.5 * std::numbers::sqrt2;

struct SpectrumSummary {
  double median_frequency = 0.0;  // cycles per pixel (radial)
  double total_magnitude = 0.0;   // excludes the DC bin
  std::vector<std::pair<double, double>> histogram;  // (bin center, magnitude)
};

/// |F(u,v)| of the mean-subtracted image. DC bin is zero by construction.
inline std::vector<double> magnitude_spectrum(const ImageBuffer& img,
                                              WindowMode window = WindowMode::None) {
  if (img.channels != 1) throw DimensionMismatch("magnitude_spectrum: expected 1 channel");
  if (img.width < 8 || img.height < 8)
    throw ImageTooSmall("magnitude_spectrum: need at least 8x8 pixels");

  std::vector<double> data = img.pixels;
  const double mean =
      std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
  for (double& v : data) v -= mean;

  if (window == WindowMode::Hann) {
    for (int y = 0; y < img.height; ++y) {
      const double wy = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * y / (img.height - 1));
      for (int x = 0; x < img.width; ++x) {
        const double wx = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * x / (img.width - 1));
        data[static_cast<size_t>(y) * img.width + x] *= wx * wy;
      }
    }
  }

  const auto freq = fft_2d(data, img.width, img.height);
  std::vector<double> mag(freq.size());
  for (size_t i = 0; i < freq.size(); ++i) mag[i] = std::abs(freq[i]);
  if (window == WindowMode::None) mag[0] = 0.0;  // mean removed; kill rounding residue
  return mag;
}

namespace detail {

inline double signed_frequency(int k, int n) {
  return (k < (n + 1) / 2 ? k : k - n) / static_cast<double>(n);
}

}  // namespace detail

/// Magnitude-weighted median radial frequency of the image spectrum.
/// Magnitudes are accumulated into uniform radial bins over [0, 0.5*sqrt(2)];
/// the median is the smallest bin center at which the cumulative magnitude
/// reaches half the total. DC is excluded.
inline SpectrumSummary score_view(const ImageBuffer& img, const ScoreOptions& opt = {}) {
  const auto mag = magnitude_spectrum(img, opt.window);
  const int w = img.width, h = img.height;
  const int bins = opt.radial_bins;
  const double bin_width = kMaxRadialFrequency / bins;

  SpectrumSummary out;
  out.histogram.resize(static_cast<size_t>(bins));
  for (int b = 0; b < bins; ++b)
    out.histogram[b] = {(b + 0.5) * bin_width, 0.0};

  for (int v = 0; v < h; ++v) {
    const double fv = detail::signed_frequency(v, h);
    for (int u = 0; u < w; ++u) {
      if (u == 0 && v == 0) continue;
      const double fu = detail::signed_frequency(u, w);
      const double rho = std::hypot(fu, fv);
      const int b = std::min(bins - 1, static_cast<int>(rho / bin_width));
      const double m = mag[static_cast<size_t>(v) * w + u];
      out.histogram[b].second += m;
      out.total_magnitude += m;
    }
  }
  if (out.total_magnitude < 1e-12)
    throw ZeroSpectrum("score_view: spectrum has no energy (constant image)");

  if (opt.mode == ScoreMode::MagnitudeMedian) {
    // alternative reading: plain median of the magnitude values
    std::vector<double> values(mag.begin(), mag.end());
    values.erase(values.begin());  // DC
    std::nth_element(values.begin(), values.begin() + values.size() / 2, values.end());
    out.median_frequency = values[values.size() / 2];
    return out;
  }

  const double half = 0.5 * out.total_magnitude;
  double cum = 0.0;
  for (const auto& [center, m] : out.histogram) {
    cum += m;
    if (cum >= half) {
      out.median_frequency = center;
      break;
    }
  }
  return out;
}

/// Argmin of median_frequency; ties broken by smallest view id.
inline int rank_candidates(const std::vector<std::pair<int, SpectrumSummary>>& scores) {
  if (scores.empty()) throw EmptyCandidates("rank_candidates: no scored candidates");
  int best_id = scores.front().first;
  double best = scores.front().second.median_frequency;
  for (const auto& [id, summary] : scores) {
    if (summary.median_frequency < best ||
        (summary.median_frequency == best && id < best_id)) {
      best = summary.median_frequency;
      best_id = id;
    }
  }
  return best_id;
}

}  // namespace nbv
