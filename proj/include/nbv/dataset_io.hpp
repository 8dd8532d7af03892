#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbv/core_types.hpp"
#include "nbv/reconstruction_proxy.hpp"

namespace nbv {

struct ParseError : Error {
  using Error::Error;
};
struct UnsupportedCameraModel : Error {
  using Error::Error;
};

/// Ordered view set; ids equal position indices, order is acquisition order.
struct Dataset {
  std::vector<CameraView> views;
  std::string name;
};

namespace detail {

struct ColmapCamera {
  std::string model;
  int width = 0, height = 0;
  std::vector<double> params;
};

template <typename T>
T parse_field(std::istringstream& ss, const std::string& path, int line_no) {
  T value;
  if (!(ss >> value)) {
    std::ostringstream msg;
    msg << path << ": malformed field on line " << line_no;
    throw ParseError(msg.str());
  }
  return value;
}

}  // namespace detail

/// Reads the COLMAP text model (cameras.txt + images.txt). PINHOLE and
/// SIMPLE_PINHOLE only; 2D-point lines are skipped. Views come back ordered
/// by image name ascending as an acquisition-order proxy.
inline Dataset read_colmap_text(const std::filesystem::path& cameras_path,
                                const std::filesystem::path& images_path) {
  std::ifstream cam_file(cameras_path);
  if (!cam_file) throw ParseError("cannot open " + cameras_path.string());

  std::map<int, detail::ColmapCamera> cameras;
  std::string line;
  int line_no = 0;
  while (std::getline(cam_file, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    const int cam_id = detail::parse_field<int>(ss, cameras_path.string(), line_no);
    detail::ColmapCamera cam;
    cam.model = detail::parse_field<std::string>(ss, cameras_path.string(), line_no);
    cam.width = detail::parse_field<int>(ss, cameras_path.string(), line_no);
    cam.height = detail::parse_field<int>(ss, cameras_path.string(), line_no);
    double p;
    while (ss >> p) cam.params.push_back(p);
    if (cam.model == "SIMPLE_PINHOLE") {
      if (cam.params.size() != 3)
        throw ParseError(cameras_path.string() + ": bad SIMPLE_PINHOLE params on line " +
                         std::to_string(line_no));
    } else if (cam.model == "PINHOLE") {
      if (cam.params.size() != 4)
        throw ParseError(cameras_path.string() + ": bad PINHOLE params on line " +
                         std::to_string(line_no));
    } else {
      throw UnsupportedCameraModel("unsupported camera model: " + cam.model);
    }
    cameras[cam_id] = cam;
  }

  std::ifstream img_file(images_path);
  if (!img_file) throw ParseError("cannot open " + images_path.string());

  struct Entry {
    std::string name;
    CameraView view;
  };
  std::vector<Entry> entries;
  line_no = 0;
  while (std::getline(img_file, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    const std::string& path = images_path.native();
    detail::parse_field<int>(ss, path, line_no);  // IMAGE_ID, unused
    const double qw = detail::parse_field<double>(ss, path, line_no);
    const double qx = detail::parse_field<double>(ss, path, line_no);
    const double qy = detail::parse_field<double>(ss, path, line_no);
    const double qz = detail::parse_field<double>(ss, path, line_no);
    const double tx = detail::parse_field<double>(ss, path, line_no);
    const double ty = detail::parse_field<double>(ss, path, line_no);
    const double tz = detail::parse_field<double>(ss, path, line_no);
    const int cam_id = detail::parse_field<int>(ss, path, line_no);
    const auto name = detail::parse_field<std::string>(ss, path, line_no);

    const auto it = cameras.find(cam_id);
    if (it == cameras.end())
      throw ParseError(images_path.string() + ": unknown camera id on line " +
                       std::to_string(line_no));
    const auto& cam = it->second;

    CameraView v;
    Quat q(qw, qx, qy, qz);
    q.normalize();
    v.rotation_wc = q.toRotationMatrix();
    v.translation_wc = Vec3(tx, ty, tz);
    v.width = cam.width;
    v.height = cam.height;
    if (cam.model == "SIMPLE_PINHOLE") {
      v.fx = v.fy = cam.params[0];
      v.cx = cam.params[1];
      v.cy = cam.params[2];
    } else {
      v.fx = cam.params[0];
      v.fy = cam.params[1];
      v.cx = cam.params[2];
      v.cy = cam.params[3];
    }
    entries.push_back({name, v});
    // the following line holds the POINTS2D list (possibly empty); skip it
    if (std::getline(img_file, line)) ++line_no;
  }

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.name < b.name; });
  Dataset ds;
  ds.name = images_path.parent_path().filename().string();
  for (size_t i = 0; i < entries.size(); ++i) {
    entries[i].view.id = static_cast<int>(i);
    ds.views.push_back(entries[i].view);
  }
  return ds;
}

/// Writes the dataset back out as COLMAP text, one PINHOLE camera per view.
/// Image names follow the id order so a round trip preserves ordering.
inline void write_colmap_text(const Dataset& ds, const std::filesystem::path& cameras_path,
                              const std::filesystem::path& images_path) {
  std::ofstream cam_file(cameras_path);
  cam_file << "# Camera list with one line of data per camera:\n"
           << "#   CAMERA_ID, MODEL, WIDTH, HEIGHT, PARAMS[]\n";
  char buf[512];
  for (const auto& v : ds.views) {
    std::snprintf(buf, sizeof(buf), "%d PINHOLE %d %d %.17g %.17g %.17g %.17g\n",
                  v.id + 1, v.width, v.height, v.fx, v.fy, v.cx, v.cy);
    cam_file << buf;
  }

  std::ofstream img_file(images_path);
  img_file << "# Image list with two lines of data per image:\n"
           << "#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n"
           << "#   POINTS2D[] as (X, Y, POINT3D_ID)\n";
  for (const auto& v : ds.views) {
    Quat q(v.rotation_wc);
    if (q.w() < 0) q.coeffs() *= -1.0;  // canonical sign for reproducible output
    std::snprintf(buf, sizeof(buf),
                  "%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %d view_%05d.png\n",
                  v.id + 1, q.w(), q.x(), q.y(), q.z(), v.translation_wc.x(),
                  v.translation_wc.y(), v.translation_wc.z(), v.id + 1, v.id);
    img_file << buf << "\n";  // empty POINTS2D line
  }
}

struct OrbitIntrinsics {
  int width = 64, height = 64;
  double fx = 64, fy = 64;
};

namespace detail {

inline CameraView look_at(const Vec3& center, const Vec3& target,
                          const OrbitIntrinsics& intr) {
  const Vec3 forward = (target - center).normalized();
  Vec3 up(0, 0, 1);
  if (std::abs(forward.dot(up)) > 0.999) up = Vec3(0, 1, 0);
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);

  CameraView v;
  v.rotation_wc.row(0) = right;
  v.rotation_wc.row(1) = down;
  v.rotation_wc.row(2) = forward;
  v.translation_wc = -v.rotation_wc * center;
  v.width = intr.width;
  v.height = intr.height;
  v.fx = intr.fx;
  v.fy = intr.fy;
  v.cx = intr.width / 2.0;
  v.cy = intr.height / 2.0;
  return v;
}

}  // namespace detail

/// Views on n_orbits rings around target, traced sequentially so the full
/// trajectory makes n_orbits revolutions. Ring heights differ slightly;
/// every center sits at exactly `radius` from target and looks at it.
inline Dataset generate_orbit_dataset(int n_views, int n_orbits, double radius,
                                      const Vec3& target, const OrbitIntrinsics& intr,
                                      uint64_t seed) {
  Dataset ds;
  ds.name = "orbit";
  DeterministicRng rng(seed + 1);
  int next_id = 0;
  for (int k = 0; k < n_orbits; ++k) {
    const int count = n_views / n_orbits + (k < n_views % n_orbits ? 1 : 0);
    const double ring_height = radius * 0.12 * (k - 0.5 * (n_orbits - 1));
    for (int i = 0; i < count; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / count;
      const double h = ring_height + 0.01 * radius * rng.next_signed();
      const double ring_r = std::sqrt(radius * radius - h * h);
      const Vec3 center =
          target + Vec3(ring_r * std::cos(angle), ring_r * std::sin(angle), h);
      CameraView v = detail::look_at(center, target, intr);
      v.id = next_id++;
      ds.views.push_back(v);
    }
  }
  return ds;
}

/// Seeded random scene of Gaussians inside an axis-aligned box.
inline Scene generate_cluster_scene(int n_gaussians, const Vec3& bounds_min,
                                    const Vec3& bounds_max, uint64_t seed) {
  Scene scene;
  DeterministicRng rng(seed + 0x5DEECE66DULL);
  const Vec3 extent = bounds_max - bounds_min;
  const double mean_extent = extent.sum() / 3.0;
  for (int i = 0; i < n_gaussians; ++i) {
    Gaussian3D g;
    for (int a = 0; a < 3; ++a) g.mean(a) = bounds_min(a) + rng.next_unit() * extent(a);
    for (int a = 0; a < 3; ++a)
      g.scale(a) = mean_extent * (0.03 + 0.09 * rng.next_unit());
    Eigen::Vector4d q;
    for (int a = 0; a < 4; ++a) q(a) = rng.next_signed();
    if (q.norm() < 1e-6) q = Eigen::Vector4d(1, 0, 0, 0);
    q.normalize();
    g.rotation = Quat(q(0), q(1), q(2), q(3));
    g.opacity = 0.6 + 0.35 * rng.next_unit();
    for (int a = 0; a < 3; ++a) g.color(a) = 0.1 + 0.9 * rng.next_unit();
    scene.gaussians.push_back(g);
  }
  return scene;
}

inline nlohmann::ordered_json scene_to_json(const Scene& scene) {
  nlohmann::ordered_json j;
  j["background_color"] = {scene.background_color.x(), scene.background_color.y(),
                           scene.background_color.z()};
  auto& arr = j["gaussians"] = nlohmann::ordered_json::array();
  for (const auto& g : scene.gaussians) {
    nlohmann::ordered_json jg;
    jg["mean"] = {g.mean.x(), g.mean.y(), g.mean.z()};
    jg["scale"] = {g.scale.x(), g.scale.y(), g.scale.z()};
    jg["rotation"] = {g.rotation.w(), g.rotation.x(), g.rotation.y(), g.rotation.z()};
    jg["opacity"] = g.opacity;
    jg["color"] = {g.color.x(), g.color.y(), g.color.z()};
    arr.push_back(jg);
  }
  return j;
}

inline Scene scene_from_json(const nlohmann::json& j) {
  Scene scene;
  const auto& bg = j.at("background_color");
  scene.background_color = Vec3(bg[0], bg[1], bg[2]);
  for (const auto& jg : j.at("gaussians")) {
    Gaussian3D g;
    const auto& m = jg.at("mean");
    g.mean = Vec3(m[0], m[1], m[2]);
    const auto& s = jg.at("scale");
    g.scale = Vec3(s[0], s[1], s[2]);
    const auto& q = jg.at("rotation");
    g.rotation = Quat(q[0], q[1], q[2], q[3]);
    g.rotation.normalize();
    g.opacity = jg.at("opacity");
    const auto& c = jg.at("color");
    g.color = Vec3(c[0], c[1], c[2]);
    scene.gaussians.push_back(g);
  }
  return scene;
}

inline void write_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << scene_to_json(scene).dump(2) << "\n";
}

inline Scene read_scene(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    f >> j;
    return scene_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Config for cmd_generate: one synthetic scene plus its orbit trajectory.
struct SyntheticConfig {
  int n_views = 60;
  int n_orbits = 3;
  double radius = 6.0;
  Vec3 target = Vec3::Zero();
  uint64_t seed = 0;
  int n_gaussians = 120;
  Vec3 bounds_min = Vec3(-3, -3, -1);
  Vec3 bounds_max = Vec3(3, 3, 1);
  OrbitIntrinsics intrinsics;
};

inline SyntheticConfig synthetic_config_from_json(const nlohmann::json& j) {
  SyntheticConfig c;
  c.n_views = j.value("n_views", c.n_views);
  c.n_orbits = j.value("n_orbits", c.n_orbits);
  c.radius = j.value("radius", c.radius);
  if (j.contains("target"))
    c.target = Vec3(j["target"][0], j["target"][1], j["target"][2]);
  c.seed = j.value("seed", c.seed);
  c.n_gaussians = j.value("n_gaussians", c.n_gaussians);
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    c.bounds_min = Vec3(b["min"][0], b["min"][1], b["min"][2]);
    c.bounds_max = Vec3(b["max"][0], b["max"][1], b["max"][2]);
  }
  c.intrinsics.width = j.value("width", c.intrinsics.width);
  c.intrinsics.height = j.value("height", c.intrinsics.height);
  c.intrinsics.fx = j.value("fx", c.intrinsics.fx);
  c.intrinsics.fy = j.value("fy", c.intrinsics.fy);
  return c;
}

inline SyntheticConfig read_synthetic_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    f >> j;
    return synthetic_config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace nbv
