#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbv {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct ImageTooSmall : Error {
  using Error::Error;
};

/// One anisotropic splat: mean, per-axis stddevs, orientation, opacity, flat RGB.
struct Gaussian3D {
  Vec3 mean = Vec3::Zero();
  Vec3 scale = Vec3::Ones();        // per-axis standard deviations, > 0
  Quat rotation = Quat::Identity(); // unit quaternion
  double opacity = 1.0;             // [0, 1]
  Vec3 color = Vec3::Ones();        // RGB, each in [0, 1]

  void normalize_rotation() { rotation.normalize(); }
};

/// Covariance R * diag(scale^2) * R^T. Symmetric positive definite for scale > 0.
inline Mat3 covariance_of(const Gaussian3D& g) {
  const Mat3 r = g.rotation.toRotationMatrix();
  return r * g.scale.cwiseProduct(g.scale).asDiagonal() * r.transpose();
}

/// Pinhole camera with world->camera extrinsics (x_cam = R * x_world + t),
/// the COLMAP convention.
struct CameraView {
  int id = 0;
  Mat3 rotation_wc = Mat3::Identity();
  Vec3 translation_wc = Vec3::Zero();
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;
};

inline Vec3 camera_center(const CameraView& view) {
  return -view.rotation_wc.transpose() * view.translation_wc;
}

/// Row-major raster, 1 or 3 channels, values in [0, 1].
struct ImageBuffer {
  int width = 0, height = 0, channels = 1;
  std::vector<double> pixels;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c),
        pixels(static_cast<size_t>(w) * h * c, fill) {}

  double& at(int x, int y, int c = 0) {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c = 0) const {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  size_t size() const { return pixels.size(); }
};

/// Rec. 601 luma of an RGB buffer; identity on single-channel input.
inline ImageBuffer to_grayscale(const ImageBuffer& img) {
  if (img.channels == 1) return img;
  ImageBuffer out(img.width, img.height, 1);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out.at(x, y) =
          0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
  return out;
}

/// Rotation + uniform scale + translation: p -> scale * rotation * p + translation.
struct SimilarityTransform {
  Mat3 rotation = Mat3::Identity();
  double scale = 1.0;
  Vec3 translation = Vec3::Zero();
};

struct Scene {
  std::vector<Gaussian3D> gaussians;
  Vec3 background_color = Vec3::Zero();
};

}  // namespace nbv
