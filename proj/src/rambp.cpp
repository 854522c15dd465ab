#include "rambp/rambp.hpp"

#include <stdexcept>

#include "rambp/parallel.hpp"

namespace rambp {

std::array<PixelPos, 8> patch_centers(PixelPos pos, int radius) {
  if (radius < 1) throw std::invalid_argument("patch radius must be >= 1");
  const int r = radius;
  return {{
      {pos.row, pos.col + r},
      {pos.row - r, pos.col + r},
      {pos.row - r, pos.col},
      {pos.row - r, pos.col - r},
      {pos.row, pos.col - r},
      {pos.row + r, pos.col - r},
      {pos.row + r, pos.col},
      {pos.row + r, pos.col + r},
  }};
}

std::uint8_t rambp_code(const GrayImage& img, const CorruptionMask& mask, const ThresholdMap& tmap,
                        PixelPos pos, const DescriptorParams& params) {
  const double t = tmap.threshold(pos.row, pos.col);
  const int radius = patch_radius(params.max_window, tmap.window_size(pos.row, pos.col));
  const auto centers = patch_centers(pos, radius);
  unsigned code = 0;
  for (unsigned i = 0; i < 8; ++i) {
    const double beta = adaptive_window_median(img, mask, centers[i], params.max_window).value;
    if (t >= beta) code |= 1u << i;
  }
  return static_cast<std::uint8_t>(code);
}

PatternImage rambp_code_image(const GrayImage& img, const CorruptionMask& mask, const ThresholdMap& tmap,
                              const DescriptorParams& params, unsigned workers) {
  params.validate();
  const int w = img.width(), h = img.height();
  if (mask.width() != w || mask.height() != h || tmap.width() != w || tmap.height() != h)
    throw std::invalid_argument("mask/threshold dimensions do not match the image");

  // Patch medians on [-margin, h+margin) x [-margin, w+margin).
  const int margin = 2 * params.max_window;
  const int ew = w + 2 * margin, eh = h + 2 * margin;
  std::vector<double> medians(static_cast<std::size_t>(ew) * eh);
  parallel_for(static_cast<std::size_t>(eh), workers, [&](std::size_t er) {
    for (int ec = 0; ec < ew; ++ec) {
      const PixelPos p{static_cast<int>(er) - margin, ec - margin};
      medians[er * ew + ec] = adaptive_window_median(img, mask, p, params.max_window).value;
    }
  });

  PatternImage out{w, h, 256, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h)};
  parallel_for(static_cast<std::size_t>(h), workers, [&](std::size_t row) {
    const int r = static_cast<int>(row);
    for (int c = 0; c < w; ++c) {
      const double t = tmap.threshold(r, c);
      const auto centers = patch_centers({r, c}, patch_radius(params.max_window, tmap.window_size(r, c)));
      unsigned code = 0;
      for (unsigned i = 0; i < 8; ++i) {
        const auto idx = static_cast<std::size_t>(centers[i].row + margin) * ew + (centers[i].col + margin);
        if (t >= medians[idx]) code |= 1u << i;
      }
      out.codes[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint16_t>(code);
    }
  });
  return out;
}

RambpAnalysis analyze(const GrayImage& img, const DescriptorParams& params, unsigned workers) {
  params.validate();
  RambpAnalysis a;
  a.mask = classify_image(img, {}, workers);
  a.thresholds = build_threshold_map(img, a.mask, params, workers);
  a.codes = rambp_code_image(img, a.mask, a.thresholds, params, workers);
  return a;
}

FeatureHistogram rambp_descriptor(const GrayImage& img, const DescriptorParams& params, unsigned workers) {
  return FeatureHistogram::from_codes(analyze(img, params, workers).codes);
}

}  // namespace rambp
