#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rambp/image.hpp"

namespace rambp {

/// Per-pixel verdict of the impulse detector: 1 = uncorrupted, 0 = corrupted.
class CorruptionMask {
 public:
  CorruptionMask() = default;
  CorruptionMask(int width, int height, std::uint8_t fill = 1)
      : width_(width), height_(height), labels_(static_cast<std::size_t>(width) * height, fill) {}
  CorruptionMask(int width, int height, std::vector<std::uint8_t> labels);

  int width() const { return width_; }
  int height() const { return height_; }

  bool uncorrupted(int row, int col) const {
    return labels_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  bool uncorrupted_padded(int row, int col) const {
    return uncorrupted(clamp_index(row, height_), clamp_index(col, width_));
  }
  void set(int row, int col, bool uncorrupted) {
    labels_[static_cast<std::size_t>(row) * width_ + col] = uncorrupted ? 1 : 0;
  }

  std::span<const std::uint8_t> labels() const { return labels_; }
  std::size_t corrupted_count() const;

  /// 255 for uncorrupted, 0 for corrupted; for visual inspection.
  GrayImage to_image() const;

  friend bool operator==(const CorruptionMask&, const CorruptionMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
};

/// Three-cluster split of a sorted window. The middle cluster is
/// (v_low, v_high]; when the left half has no intensity gap at all the left
/// cluster is empty and the middle cluster starts at the minimum inclusive.
struct BoundaryAnalysis {
  std::vector<std::uint8_t> sorted;
  std::uint8_t median = 0;
  std::uint8_t v_low = 0;
  std::uint8_t v_high = 0;
  bool left_gap = false;

  bool in_middle_cluster(std::uint8_t v) const {
    return (left_gap ? v > v_low : v >= v_low) && v <= v_high;
  }
};

/// Sorts `values` (odd count >= 3), takes the median and the largest
/// consecutive difference on each side of it. Ties pick the lowest index.
BoundaryAnalysis boundary_analysis(std::span<const std::uint8_t> values);

struct ClassifierParams {
  int stage1_window = 21;
  int stage2_window = 3;
  void validate() const;
};

struct PixelVerdict {
  bool stage1_pass = false;
  bool stage2_pass = false;  // only evaluated when stage 1 fails
  bool uncorrupted() const { return stage1_pass || stage2_pass; }
};

/// Both stages for a single pixel, windows gathered with replicate padding.
PixelVerdict examine_pixel(const GrayImage& img, PixelPos pos, const ClassifierParams& params = {});

bool classify_pixel(const GrayImage& img, PixelPos pos, const ClassifierParams& params = {});

/// Whole-image labeling. Stage 1 runs on a sliding 256-bin window histogram;
/// the result equals classify_pixel at every position.
CorruptionMask classify_image(const GrayImage& img, const ClassifierParams& params = {},
                              unsigned workers = 1);

}  // namespace rambp
