#pragma once

#include <array>
#include <cstdint>

#include "rambp/histogram.hpp"
#include "rambp/image.hpp"
#include "rambp/pixel_classifier.hpp"
#include "rambp/threshold_map.hpp"

namespace rambp {

/// Eight patch centers on the Chebyshev ring of `radius` around `pos`:
/// east first, then counter-clockwise (north is -row). Bit i of a code
/// corresponds to center i. Centers may fall outside the image.
std::array<PixelPos, 8> patch_centers(PixelPos pos, int radius);

/// Patch radius for a pixel whose accepted threshold window is `window_size`.
inline int patch_radius(int max_window, int window_size) { return max_window + window_size; }

/// Code of one pixel, recomputing every patch median from scratch.
std::uint8_t rambp_code(const GrayImage& img, const CorruptionMask& mask, const ThresholdMap& tmap,
                        PixelPos pos, const DescriptorParams& params);

/// Code image. Patch medians are computed once per position on a grid
/// extended by the maximum radius and then looked up.
PatternImage rambp_code_image(const GrayImage& img, const CorruptionMask& mask, const ThresholdMap& tmap,
                              const DescriptorParams& params, unsigned workers = 1);

/// All intermediate products of the descriptor for one image.
struct RambpAnalysis {
  CorruptionMask mask;
  ThresholdMap thresholds;
  PatternImage codes;
};

RambpAnalysis analyze(const GrayImage& img, const DescriptorParams& params = {}, unsigned workers = 1);

/// 256-bin histogram of the code image divided by the pixel count.
FeatureHistogram rambp_descriptor(const GrayImage& img, const DescriptorParams& params = {},
                                  unsigned workers = 1);

}  // namespace rambp
