#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "nbv/core_types.hpp"
#include "nbv/dataset_io.hpp"

namespace nbv {

/// Binary PPM (P6, maxval 255). value = round(pixel * 255), clamped.
inline void write_ppm(const ImageBuffer& img, const std::filesystem::path& path) {
  ImageBuffer rgb = img;
  if (img.channels == 1) {
    rgb = ImageBuffer(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        rgb.at(x, y, 0) = rgb.at(x, y, 1) = rgb.at(x, y, 2) = img.at(x, y);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << "P6\n" << rgb.width << " " << rgb.height << "\n255\n";
  std::vector<uint8_t> bytes(rgb.pixels.size());
  for (size_t i = 0; i < rgb.pixels.size(); ++i)
    bytes[i] = static_cast<uint8_t>(
        std::clamp(std::lround(rgb.pixels[i] * 255.0), 0L, 255L));
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

inline ImageBuffer read_ppm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path.string());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  f >> magic >> w >> h >> maxval;
  if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
    throw ParseError(path.string() + ": not an 8-bit P6 PPM");
  f.get();  // single whitespace after the header
  std::vector<uint8_t> bytes(static_cast<size_t>(w) * h * 3);
  f.read(reinterpret_cast<char*>(bytes.data()),
         static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ParseError(path.string() + ": truncated pixel data");
  ImageBuffer img(w, h, 3);
  for (size_t i = 0; i < bytes.size(); ++i) img.pixels[i] = bytes[i] / 255.0;
  return img;
}

/// Separable Gaussian blur with wrapped (circular) borders, so the discrete
/// spectrum of the result is the input spectrum attenuated bin-by-bin.
/// sigma = 0 is the identity.
inline ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  if (sigma <= 0.0) return img;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  const auto wrap = [](int i, int n) { return ((i % n) + n) % n; };

  ImageBuffer tmp(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += kernel[i + radius] * img.at(wrap(x + i, img.width), y, c);
        tmp.at(x, y, c) = acc;
      }
  ImageBuffer out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += kernel[i + radius] * tmp.at(x, wrap(y + i, img.height), c);
        out.at(x, y, c) = acc;
      }
  return out;
}

}  // namespace nbv
