#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "nbv/core_types.hpp"

namespace nbv {

namespace render_constants {
inline constexpr double kLowpassFloor = 0.3;   // px^2, added to cov2d diagonal
inline constexpr double kAlphaMax = 0.99;      // per-splat opacity clamp
inline constexpr double kNearPlane = 0.01;     // world units, camera-frame z
inline constexpr double kCutoffSigmaSq = 9.0;  // 3-sigma elliptical truncation
}  // namespace render_constants

/// A 3D Gaussian projected onto the image plane.
struct ProjectedSplat {
  Vec2 mean2d = Vec2::Zero();   // pixels
  Mat2 cov2d = Mat2::Identity(); // pixels^2, includes the low-pass floor
  double depth = 0.0;           // camera-frame z
  double opacity = 1.0;
  Vec3 color = Vec3::Ones();
};

/// Perspective projection of one Gaussian. Returns nullopt behind the near plane.
/// cov2d = J * W * Sigma * W^T * J^T + lowpass * I with J the perspective
/// Jacobian at the mean and W the world->camera rotation.
inline std::optional<ProjectedSplat> project_gaussian(const Gaussian3D& g,
                                                      const CameraView& view) {
  const Vec3 p_cam = view.rotation_wc * g.mean + view.translation_wc;
  const double z = p_cam.z();
  if (z <= render_constants::kNearPlane) return std::nullopt;

  ProjectedSplat s;
  s.mean2d = Vec2(view.fx * p_cam.x() / z + view.cx, view.fy * p_cam.y() / z + view.cy);
  s.depth = z;
  s.opacity = g.opacity;
  s.color = g.color;

  Eigen::Matrix<double, 2, 3> jac;
  jac << view.fx / z, 0.0, -view.fx * p_cam.x() / (z * z),
         0.0, view.fy / z, -view.fy * p_cam.y() / (z * z);
  const Eigen::Matrix<double, 2, 3> m = jac * view.rotation_wc;
  s.cov2d = m * covariance_of(g) * m.transpose() +
            render_constants::kLowpassFloor * Mat2::Identity();
  return s;
}

namespace detail {

/// Splats projected from a scene, in painter's order. Depth ties keep the
/// original list index so output is independent of scene ordering.
inline std::vector<ProjectedSplat> sorted_splats(const Scene& scene,
                                                 const CameraView& view) {
  std::vector<ProjectedSplat> splats;
  splats.reserve(scene.gaussians.size());
  for (const auto& g : scene.gaussians)
    if (auto s = project_gaussian(g, view)) splats.push_back(*s);
  std::stable_sort(splats.begin(), splats.end(),
                   [](const ProjectedSplat& a, const ProjectedSplat& b) {
                     return a.depth < b.depth;
                   });
  return splats;
}

inline double splat_alpha(const ProjectedSplat& s, const Mat2& cov_inv, double px,
                          double py) {
  const Vec2 d(px - s.mean2d.x(), py - s.mean2d.y());
  const double maha_sq = d.dot(cov_inv * d);
  if (maha_sq > render_constants::kCutoffSigmaSq) return 0.0;
  return std::min(s.opacity * std::exp(-0.5 * maha_sq), render_constants::kAlphaMax);
}

}  // namespace detail

/// Forward-render to RGB by front-to-back alpha compositing in depth order.
/// Remaining transmittance picks up the background color.
inline ImageBuffer render(const Scene& scene, const CameraView& view) {
  ImageBuffer img(view.width, view.height, 3);
  std::vector<double> transmittance(static_cast<size_t>(view.width) * view.height, 1.0);

  const auto splats = detail::sorted_splats(scene, view);
  for (const auto& s : splats) {
    const Mat2 cov_inv = s.cov2d.inverse();
    // 3-sigma axis-aligned bounding box cull
    const double rx = 3.0 * std::sqrt(s.cov2d(0, 0));
    const double ry = 3.0 * std::sqrt(s.cov2d(1, 1));
    const int x0 = std::max(0, static_cast<int>(std::floor(s.mean2d.x() - rx)));
    const int x1 = std::min(view.width - 1, static_cast<int>(std::ceil(s.mean2d.x() + rx)));
    const int y0 = std::max(0, static_cast<int>(std::floor(s.mean2d.y() - ry)));
    const int y1 = std::min(view.height - 1, static_cast<int>(std::ceil(s.mean2d.y() + ry)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        double& t = transmittance[static_cast<size_t>(y) * view.width + x];
        if (t <= 0.0) continue;
        const double alpha = detail::splat_alpha(s, cov_inv, x, y);
        if (alpha <= 0.0) continue;
        const double w = alpha * t;
        img.at(x, y, 0) += w * s.color.x();
        img.at(x, y, 1) += w * s.color.y();
        img.at(x, y, 2) += w * s.color.z();
        t *= 1.0 - alpha;
      }
    }
  }

  for (int y = 0; y < view.height; ++y) {
    for (int x = 0; x < view.width; ++x) {
      const double t = transmittance[static_cast<size_t>(y) * view.width + x];
      for (int c = 0; c < 3; ++c) {
        double v = img.at(x, y, c) + t * scene.background_color(c);
        img.at(x, y, c) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return img;
}

/// Luma render, single channel; feeds the frequency scorer.
inline ImageBuffer render_grayscale(const Scene& scene, const CameraView& view) {
  return to_grayscale(render(scene, view));
}

}  // namespace nbv
