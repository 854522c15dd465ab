#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rambp {

/// Per-pixel pattern codes; `bins` is the size of the code alphabet.
struct PatternImage {
  int width = 0;
  int height = 0;
  std::size_t bins = 256;
  std::vector<std::uint16_t> codes;

  std::uint16_t at(int row, int col) const { return codes[static_cast<std::size_t>(row) * width + col]; }
  friend bool operator==(const PatternImage&, const PatternImage&) = default;
};

/// L1-normalized pattern frequencies.
struct FeatureHistogram {
  std::vector<double> bins;

  std::size_t size() const { return bins.size(); }
  friend bool operator==(const FeatureHistogram&, const FeatureHistogram&) = default;

  static FeatureHistogram from_codes(const PatternImage& codes) {
    FeatureHistogram h;
    h.bins.assign(codes.bins, 0.0);
    std::vector<std::size_t> counts(codes.bins, 0);
    for (auto c : codes.codes) {
      if (c >= codes.bins) throw std::out_of_range("pattern code outside the histogram");
      ++counts[c];
    }
    const auto n = static_cast<double>(codes.codes.size());
    for (std::size_t i = 0; i < counts.size(); ++i) h.bins[i] = static_cast<double>(counts[i]) / n;
    return h;
  }
};

}  // namespace rambp
