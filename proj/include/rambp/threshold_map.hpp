#pragma once

#include <cstdint>
#include <vector>

#include "rambp/image.hpp"
#include "rambp/pixel_classifier.hpp"

namespace rambp {

struct DescriptorParams {
  int max_window = 5;
  void validate() const;
};

struct WindowMedian {
  double value = 0.0;
  int accepted = 0;
};

/// Grows a square window from 3x3 by 2 while it is narrower than
/// `max_window`, accepting the first one whose uncorrupted count is at least
/// half its area. The max_window window is the fallback and is never tested.
/// Returns the median of the uncorrupted intensities in the accepted window
/// (mean of the two central values for an even count), or the median of all
/// its intensities when none is uncorrupted. `center` may be out of bounds.
WindowMedian adaptive_window_median(const GrayImage& img, const CorruptionMask& mask, PixelPos center,
                                    int max_window);

/// Median of a small multiset; even counts average the two central values.
double exact_median(std::vector<std::uint8_t> values);

class ThresholdMap {
 public:
  ThresholdMap() = default;
  ThresholdMap(int width, int height)
      : width_(width),
        height_(height),
        thresholds_(static_cast<std::size_t>(width) * height, 0.0),
        window_sizes_(static_cast<std::size_t>(width) * height, 1) {}

  int width() const { return width_; }
  int height() const { return height_; }

  double threshold(int row, int col) const { return thresholds_[index(row, col)]; }
  int window_size(int row, int col) const { return window_sizes_[index(row, col)]; }
  void set(int row, int col, double threshold, int window_size) {
    thresholds_[index(row, col)] = threshold;
    window_sizes_[index(row, col)] = window_size;
  }

  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<int>& window_sizes() const { return window_sizes_; }

  friend bool operator==(const ThresholdMap&, const ThresholdMap&) = default;

 private:
  std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * width_ + col; }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> thresholds_;
  std::vector<int> window_sizes_;
};

ThresholdMap build_threshold_map(const GrayImage& img, const CorruptionMask& mask,
                                 const DescriptorParams& params, unsigned workers = 1);

}  // namespace rambp
