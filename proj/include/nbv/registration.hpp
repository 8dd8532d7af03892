#pragma once

#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "nbv/core_types.hpp"

namespace nbv {

/// Too few or (near-)collinear source points; registration must wait for more views.
struct DegenerateInput : Error {
  using Error::Error;
};

inline Vec3 apply(const SimilarityTransform& t, const Vec3& p) {
  return t.scale * (t.rotation * p) + t.translation;
}

/// Least-squares similarity aligning source onto target: minimizes
/// sum ||s*R*x_i + t - y_i||^2 over R in SO(3), s > 0, t.
/// Reflections are corrected via the determinant sign of the SVD factors.
inline SimilarityTransform umeyama(const std::vector<Vec3>& source,
                                   const std::vector<Vec3>& target) {
  const size_t n = source.size();
  if (n != target.size()) throw DimensionMismatch("umeyama: point count mismatch");
  if (n < 3) throw DegenerateInput("umeyama: need at least 3 point pairs");

  Vec3 mu_x = Vec3::Zero(), mu_y = Vec3::Zero();
  for (size_t i = 0; i < n; ++i) {
    mu_x += source[i];
    mu_y += target[i];
  }
  mu_x /= static_cast<double>(n);
  mu_y /= static_cast<double>(n);

  Mat3 sigma_xy = Mat3::Zero();
  double var_x = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec3 dx = source[i] - mu_x;
    const Vec3 dy = target[i] - mu_y;
    sigma_xy += dy * dx.transpose();
    var_x += dx.squaredNorm();
  }
  sigma_xy /= static_cast<double>(n);
  var_x /= static_cast<double>(n);

  Eigen::JacobiSVD<Mat3> svd(sigma_xy, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 d = svd.singularValues();
  // rank >= 2 needed to pin down the rotation
  if (d(1) <= 1e-12 * std::max(1.0, d(0)))
    throw DegenerateInput("umeyama: source configuration is rank-deficient");

  Vec3 s = Vec3::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) s(2) = -1.0;

  SimilarityTransform t;
  t.rotation = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  t.scale = d.dot(s) / var_x;
  t.translation = mu_y - t.scale * (t.rotation * mu_x);
  return t;
}

/// Root mean squared deviation of the fit, for step reports.
inline double registration_rmsd(const SimilarityTransform& t,
                                const std::vector<Vec3>& source,
                                const std::vector<Vec3>& target) {
  double acc = 0.0;
  for (size_t i = 0; i < source.size(); ++i)
    acc += (apply(t, source[i]) - target[i]).squaredNorm();
  return std::sqrt(acc / static_cast<double>(source.size()));
}

/// Re-express a camera pose in the transformed frame: the camera center moves
/// with the similarity, the viewing rotation composes with R^T, intrinsics stay.
inline CameraView transform_view(const SimilarityTransform& t, const CameraView& view) {
  CameraView out = view;
  const Vec3 center = apply(t, camera_center(view));
  out.rotation_wc = view.rotation_wc * t.rotation.transpose();
  out.translation_wc = -out.rotation_wc * center;
  return out;
}

/// Map a scene through a similarity: means move, scales pick up the uniform
/// scale factor, orientations rotate.
inline Scene transform_scene(const SimilarityTransform& t, const Scene& scene) {
  Scene out = scene;
  const Quat rq(t.rotation);
  for (auto& g : out.gaussians) {
    g.mean = apply(t, g.mean);
    g.scale *= t.scale;
    g.rotation = rq * g.rotation;
    g.rotation.normalize();
  }
  return out;
}

}  // namespace nbv
