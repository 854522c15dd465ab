#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rambp/image.hpp"

namespace rambp {

enum class NoiseKind { salt_pepper, gaussian_noise, gaussian_blur };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

/// One degradation. `rho` is meaningful for salt_pepper only and `sigma` for
/// the two Gaussian kinds; the other field must stay empty.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::salt_pepper;
  std::optional<double> rho;
  std::optional<double> sigma;
  std::uint64_t seed = 0;

  static NoiseSpec salt_pepper(double rho, std::uint64_t seed = 0);
  static NoiseSpec gaussian_noise(double sigma, std::uint64_t seed = 0);
  static NoiseSpec gaussian_blur(double sigma);

  /// rho for salt_pepper, sigma otherwise.
  double parameter() const;
  void validate() const;
};

/// Each pixel independently replaced with probability rho; replaced pixels
/// become 0 or 255 with equal probability.
GrayImage salt_pepper(const GrayImage& img, double rho, std::uint64_t seed);

/// Same as salt_pepper, also reporting which positions were replaced.
GrayImage salt_pepper(const GrayImage& img, double rho, std::uint64_t seed,
                      std::vector<std::uint8_t>& corrupted);

/// round(I + N(0, sigma)) then clamp to [0,255].
GrayImage gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed);

/// Normalized Gaussian kernel of radius ceil(3 sigma), truncated and renormalized.
std::vector<double> gaussian_kernel(double sigma);

/// Separable blur with replicate-edge borders; intermediate values are kept in
/// double and rounded once at the end.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

GrayImage apply_noise(const GrayImage& img, const NoiseSpec& spec);

}  // namespace rambp
