#include "rambp/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rambp/rng.hpp"

namespace rambp {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::salt_pepper: return "salt_pepper";
    case NoiseKind::gaussian_noise: return "gaussian_noise";
    case NoiseKind::gaussian_blur: return "gaussian_blur";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "salt_pepper") return NoiseKind::salt_pepper;
  if (name == "gaussian_noise") return NoiseKind::gaussian_noise;
  if (name == "gaussian_blur") return NoiseKind::gaussian_blur;
  throw std::invalid_argument("unknown noise kind: " + name);
}

NoiseSpec NoiseSpec::salt_pepper(double rho, std::uint64_t seed) {
  NoiseSpec s{NoiseKind::salt_pepper, rho, std::nullopt, seed};
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::gaussian_noise(double sigma, std::uint64_t seed) {
  NoiseSpec s{NoiseKind::gaussian_noise, std::nullopt, sigma, seed};
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::gaussian_blur(double sigma) {
  NoiseSpec s{NoiseKind::gaussian_blur, std::nullopt, sigma, 0};
  s.validate();
  return s;
}

double NoiseSpec::parameter() const {
  return kind == NoiseKind::salt_pepper ? rho.value_or(0.0) : sigma.value_or(0.0);
}

void NoiseSpec::validate() const {
  if (kind == NoiseKind::salt_pepper) {
    if (!rho || sigma) throw std::invalid_argument("salt_pepper takes rho only");
    if (!(*rho >= 0.0 && *rho <= 1.0)) throw std::invalid_argument("rho must lie in [0,1]");
  } else {
    if (!sigma || rho) throw std::invalid_argument(to_string(kind) + " takes sigma only");
    if (!(*sigma > 0.0) || !std::isfinite(*sigma)) throw std::invalid_argument("sigma must be > 0");
  }
}

GrayImage salt_pepper(const GrayImage& img, double rho, std::uint64_t seed,
                      std::vector<std::uint8_t>& corrupted) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0,1]");
  Xoshiro256 rng(seed);
  GrayImage out = img;
  auto px = out.pixels();
  corrupted.assign(px.size(), 0);
  // Two draws per pixel regardless of outcome keep streams aligned across rho.
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double u = rng.uniform();
    const bool salt = (rng.next() >> 63) != 0;
    if (u < rho) {
      px[i] = salt ? 255 : 0;
      corrupted[i] = 1;
    }
  }
  return out;
}

GrayImage salt_pepper(const GrayImage& img, double rho, std::uint64_t seed) {
  std::vector<std::uint8_t> unused;
  return salt_pepper(img, rho, seed, unused);
}

GrayImage gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  Xoshiro256 rng(seed);
  GrayImage out = img;
  for (auto& p : out.pixels()) {
    const double v = std::round(static_cast<double>(p) + sigma * rng.normal());
    p = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& w : k) w /= sum;
  return k;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int w = img.width(), h = img.height();

  std::vector<double> horiz(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) acc += k[d + radius] * img.sample_padded(r, c + d);
      horiz[static_cast<std::size_t>(r) * w + c] = acc;
    }

  GrayImage out(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d)
        acc += k[d + radius] * horiz[static_cast<std::size_t>(clamp_index(r + d, h)) * w + c];
      out.set(r, c, static_cast<std::uint8_t>(std::clamp(std::round(acc), 0.0, 255.0)));
    }
  return out;
}

GrayImage apply_noise(const GrayImage& img, const NoiseSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case NoiseKind::salt_pepper: return salt_pepper(img, *spec.rho, spec.seed);
    case NoiseKind::gaussian_noise: return gaussian_noise(img, *spec.sigma, spec.seed);
    case NoiseKind::gaussian_blur: return gaussian_blur(img, *spec.sigma);
  }
  throw std::logic_error("unreachable noise kind");
}

}  // namespace rambp
