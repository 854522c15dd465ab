#include "rambp/baselines.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "rambp/rambp.hpp"

namespace rambp {

PatternImage lbp_code_image(const GrayImage& img) {
  const int w = img.width(), h = img.height();
  PatternImage out{w, h, 256, std::vector<std::uint16_t>(img.size())};
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const auto center = img.at(r, c);
      const auto nbrs = patch_centers({r, c}, 1);
      unsigned code = 0;
      for (unsigned i = 0; i < 8; ++i)
        if (img.sample_padded(nbrs[i].row, nbrs[i].col) >= center) code |= 1u << i;
      out.codes[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint16_t>(code);
    }
  return out;
}

FeatureHistogram lbp_descriptor(const GrayImage& img) { return FeatureHistogram::from_codes(lbp_code_image(img)); }

int riu2_map(std::uint8_t code) {
  const auto rotated = static_cast<std::uint8_t>((code >> 1) | (code << 7));
  const int transitions = std::popcount(static_cast<unsigned>(code ^ rotated));
  return transitions <= 2 ? std::popcount(static_cast<unsigned>(code)) : 9;
}

FeatureHistogram lbp_riu2_descriptor(const GrayImage& img) {
  auto codes = lbp_code_image(img);
  for (auto& c : codes.codes) c = static_cast<std::uint16_t>(riu2_map(static_cast<std::uint8_t>(c)));
  codes.bins = 10;
  return FeatureHistogram::from_codes(codes);
}

PatternImage mbp_code_image(const GrayImage& img) {
  const int w = img.width(), h = img.height();
  PatternImage out{w, h, 512, std::vector<std::uint16_t>(img.size())};
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const auto nbrs = patch_centers({r, c}, 1);
      std::array<std::uint8_t, 9> block{};
      for (unsigned i = 0; i < 8; ++i) block[i] = img.sample_padded(nbrs[i].row, nbrs[i].col);
      block[8] = img.at(r, c);
      auto sorted = block;
      std::nth_element(sorted.begin(), sorted.begin() + 4, sorted.end());
      const auto median = sorted[4];
      unsigned code = 0;
      for (unsigned i = 0; i < 9; ++i)
        if (block[i] >= median) code |= 1u << i;
      out.codes[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint16_t>(code);
    }
  return out;
}

FeatureHistogram mbp_descriptor(const GrayImage& img) { return FeatureHistogram::from_codes(mbp_code_image(img)); }

FeatureHistogram baseline_descriptor(BaselineKind kind, const GrayImage& img) {
  switch (kind) {
    case BaselineKind::lbp: return lbp_descriptor(img);
    case BaselineKind::lbp_riu2: return lbp_riu2_descriptor(img);
    case BaselineKind::mbp: return mbp_descriptor(img);
  }
  throw std::logic_error("unreachable baseline kind");
}

}  // namespace rambp
