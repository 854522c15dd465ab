#include "rambp/threshold_map.hpp"

#include <algorithm>
#include <stdexcept>

#include "rambp/parallel.hpp"

namespace rambp {

void DescriptorParams::validate() const {
  if (max_window < 3 || max_window % 2 == 0)
    throw std::invalid_argument("max_window must be odd and >= 3");
}

double exact_median(std::vector<std::uint8_t> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

WindowMedian adaptive_window_median(const GrayImage& img, const CorruptionMask& mask, PixelPos center,
                                    int max_window) {
  if (max_window < 3 || max_window % 2 == 0)
    throw std::invalid_argument("max_window must be odd and >= 3");

  auto count_uncorrupted = [&](int width) {
    const int h = width / 2;
    int n = 0;
    for (int dr = -h; dr <= h; ++dr)
      for (int dc = -h; dc <= h; ++dc) n += mask.uncorrupted_padded(center.row + dr, center.col + dc);
    return n;
  };

  int accepted = max_window;
  for (int w = 3; w < max_window; w += 2) {
    // N_un >= w^2 / 2, compared exactly in integers.
    if (2 * count_uncorrupted(w) >= w * w) {
      accepted = w;
      break;
    }
  }

  const int h = accepted / 2;
  std::vector<std::uint8_t> clean, all;
  clean.reserve(static_cast<std::size_t>(accepted) * accepted);
  all.reserve(static_cast<std::size_t>(accepted) * accepted);
  for (int dr = -h; dr <= h; ++dr)
    for (int dc = -h; dc <= h; ++dc) {
      const auto v = img.sample_padded(center.row + dr, center.col + dc);
      all.push_back(v);
      if (mask.uncorrupted_padded(center.row + dr, center.col + dc)) clean.push_back(v);
    }
  return {exact_median(clean.empty() ? std::move(all) : std::move(clean)), accepted};
}

ThresholdMap build_threshold_map(const GrayImage& img, const CorruptionMask& mask,
                                 const DescriptorParams& params, unsigned workers) {
  params.validate();
  if (mask.width() != img.width() || mask.height() != img.height())
    throw std::invalid_argument("mask dimensions do not match the image");
  ThresholdMap tmap(img.width(), img.height());
  parallel_for(static_cast<std::size_t>(img.height()), workers, [&](std::size_t row) {
    const int r = static_cast<int>(row);
    for (int c = 0; c < img.width(); ++c) {
      if (mask.uncorrupted(r, c)) {
        tmap.set(r, c, img.at(r, c), 1);
      } else {
        const auto m = adaptive_window_median(img, mask, {r, c}, params.max_window);
        tmap.set(r, c, m.value, m.accepted);
      }
    }
  });
  return tmap;
}

}  // namespace rambp
