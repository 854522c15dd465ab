#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rambp {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row/column coordinate. Positions produced for the image itself are
/// in-bounds; patch centers may lie outside and are resolved by padding.
struct PixelPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

/// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int row, int col) const {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::uint8_t at(PixelPos p) const { return at(p.row, p.col); }
  void set(int row, int col, std::uint8_t v) {
    pixels_[static_cast<std::size_t>(row) * width_ + col] = v;
  }

  /// Replicate-edge sampling: coordinates are clamped into bounds.
  std::uint8_t sample_padded(int row, int col) const;

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

enum class PgmFormat { ascii, binary };

GrayImage read_pgm(std::string_view bytes);
std::string write_pgm(const GrayImage& img, PgmFormat format = PgmFormat::binary);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& img,
                    PgmFormat format = PgmFormat::binary);

struct Sample {
  GrayImage image;
  std::size_t class_index = 0;
  std::filesystem::path path;  // relative to the dataset root
};

struct LabeledDataset {
  std::vector<std::string> classes;
  std::vector<Sample> samples;

  std::size_t class_size(std::size_t class_index) const;
};

/// Loads `root/<class>/<image>.pgm`. Classes are sorted lexicographically and
/// samples by (class, filename), independent of directory enumeration order.
LabeledDataset load_dataset(const std::filesystem::path& root);

}  // namespace rambp
