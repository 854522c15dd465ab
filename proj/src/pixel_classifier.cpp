#include "rambp/pixel_classifier.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "rambp/parallel.hpp"

namespace rambp {

CorruptionMask::CorruptionMask(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (labels_.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("mask label count does not match width x height");
  for (auto& l : labels_) l = l ? 1 : 0;
}

std::size_t CorruptionMask::corrupted_count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{0}));
}

GrayImage CorruptionMask::to_image() const {
  std::vector<std::uint8_t> px(labels_.size());
  std::transform(labels_.begin(), labels_.end(), px.begin(),
                 [](std::uint8_t l) { return static_cast<std::uint8_t>(l ? 255 : 0); });
  return GrayImage(width_, height_, std::move(px));
}

BoundaryAnalysis boundary_analysis(std::span<const std::uint8_t> values) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("boundary_analysis needs an odd count >= 3");

  BoundaryAnalysis out;
  out.sorted.assign(values.begin(), values.end());
  std::sort(out.sorted.begin(), out.sorted.end());
  const auto& v = out.sorted;
  const std::size_t mid = (n - 1) / 2;
  out.median = v[mid];

  // diff[j] = v[j+1] - v[j]; left interval j < mid, right interval j >= mid.
  std::size_t best_left = mid - 1;
  int left_max = 0;
  for (std::size_t j = 0; j < mid; ++j) {
    const int d = v[j + 1] - v[j];
    if (d > left_max) {
      left_max = d;
      best_left = j;
    }
  }
  std::size_t best_right = mid;
  int right_max = 0;
  for (std::size_t j = mid; j + 1 < n; ++j) {
    const int d = v[j + 1] - v[j];
    if (d > right_max) {
      right_max = d;
      best_right = j;
    }
  }
  out.left_gap = left_max > 0;
  out.v_low = v[best_left];
  out.v_high = v[best_right];
  return out;
}

void ClassifierParams::validate() const {
  if (stage1_window < 3 || stage1_window % 2 == 0 || stage2_window < 3 || stage2_window % 2 == 0)
    throw std::invalid_argument("classifier windows must be odd and >= 3");
}

namespace {

std::vector<std::uint8_t> gather_window(const GrayImage& img, PixelPos pos, int width) {
  const int h = width / 2;
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(width) * width);
  for (int dr = -h; dr <= h; ++dr)
    for (int dc = -h; dc <= h; ++dc) out.push_back(img.sample_padded(pos.row + dr, pos.col + dc));
  return out;
}

bool passes(const GrayImage& img, PixelPos pos, int width) {
  const auto window = gather_window(img, pos, width);
  return boundary_analysis(window).in_middle_cluster(img.at(pos));
}

// Stage-1 membership test evaluated on a window histogram. Mirrors
// boundary_analysis: the consecutive-difference vector of the sorted window
// is nonzero only between adjacent distinct intensities, and the gap after
// intensity a sits at sorted index (count(<= a) - 1).
bool passes_histogram(const std::array<int, 256>& hist, int total, std::uint8_t center) {
  const int mid = (total - 1) / 2;
  int cum = 0;
  int prev = -1;
  int left_max = 0, right_max = 0;
  int v_low = -1, v_high = -1;
  int median = -1;
  int prev_cum = 0;
  for (int v = 0; v < 256; ++v) {
    if (hist[v] == 0) continue;
    if (prev >= 0) {
      const int gap = v - prev;
      if (prev_cum <= mid) {
        if (gap > left_max) {
          left_max = gap;
          v_low = prev;
        }
      } else if (gap > right_max) {
        right_max = gap;
        v_high = prev;
      }
    }
    cum += hist[v];
    if (median < 0 && cum >= mid + 1) median = v;
    prev = v;
    prev_cum = cum;
  }
  if (left_max == 0) v_low = median;
  if (right_max == 0) v_high = median;
  const bool above_low = left_max > 0 ? center > v_low : center >= v_low;
  return above_low && center <= v_high;
}

}  // namespace

PixelVerdict examine_pixel(const GrayImage& img, PixelPos pos, const ClassifierParams& params) {
  params.validate();
  PixelVerdict verdict;
  verdict.stage1_pass = passes(img, pos, params.stage1_window);
  if (!verdict.stage1_pass) verdict.stage2_pass = passes(img, pos, params.stage2_window);
  return verdict;
}

bool classify_pixel(const GrayImage& img, PixelPos pos, const ClassifierParams& params) {
  return examine_pixel(img, pos, params).uncorrupted();
}

CorruptionMask classify_image(const GrayImage& img, const ClassifierParams& params, unsigned workers) {
  params.validate();
  const int w = img.width(), h = img.height();
  const int half = params.stage1_window / 2;
  const int total = params.stage1_window * params.stage1_window;
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(w) * h, 0);

  parallel_for(static_cast<std::size_t>(h), workers, [&](std::size_t row_index) {
    const int r = static_cast<int>(row_index);
    std::vector<int> rows;
    for (int dr = -half; dr <= half; ++dr) rows.push_back(clamp_index(r + dr, h));
    auto add_column = [&](std::array<int, 256>& hist, int col, int delta) {
      const int cc = clamp_index(col, w);
      for (int rr : rows) hist[img.at(rr, cc)] += delta;
    };

    std::array<int, 256> hist{};
    for (int dc = -half; dc <= half; ++dc) add_column(hist, dc, +1);
    for (int c = 0; c < w; ++c) {
      if (c > 0) {
        add_column(hist, c - 1 - half, -1);
        add_column(hist, c + half, +1);
      }
      const PixelPos pos{r, c};
      bool ok = passes_histogram(hist, total, img.at(pos));
      if (!ok) ok = passes(img, pos, params.stage2_window);
      labels[static_cast<std::size_t>(r) * w + c] = ok ? 1 : 0;
    }
  });
  return CorruptionMask(w, h, std::move(labels));
}

}  // namespace rambp
