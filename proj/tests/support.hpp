#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oracle/naive.hpp"
#include "rambp/image.hpp"

namespace testing {

inline rambp::GrayImage random_image(int w, int h, std::uint32_t seed, int lo = 0, int hi = 255) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> d(lo, hi);
  rambp::GrayImage img(w, h);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(d(gen));
  return img;
}

// Smooth background with impulses; gives the detector both outcomes.
inline rambp::GrayImage textured_image(int w, int h, std::uint32_t seed, double impulse = 0.2) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> base(60, 190);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rambp::GrayImage img(w, h);
  const int b = base(gen);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      int v = b + ((r * 7 + c * 3) % 23) - 11 + static_cast<int>(u(gen) * 9);
      if (u(gen) < impulse) v = u(gen) < 0.5 ? 0 : 255;
      img.set(r, c, static_cast<std::uint8_t>(std::clamp(v, 0, 255)));
    }
  return img;
}

inline oracle::Grid to_grid(const rambp::GrayImage& img) {
  oracle::Grid g(img.height(), std::vector<int>(img.width()));
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) g[r][c] = img.at(r, c);
  return g;
}

inline rambp::GrayImage from_rows(const std::vector<std::vector<int>>& rows) {
  rambp::GrayImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) img.set(r, c, static_cast<std::uint8_t>(rows[r][c]));
  return img;
}

inline rambp::GrayImage shifted(const rambp::GrayImage& img, int delta) {
  rambp::GrayImage out = img;
  for (auto& p : out.pixels()) p = static_cast<std::uint8_t>(p + delta);
  return out;
}

}  // namespace testing
