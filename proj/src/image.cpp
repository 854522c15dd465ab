#include "rambp/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rambp {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
  if (pixels_.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("pixel count does not match width x height");
}

std::uint8_t GrayImage::sample_padded(int row, int col) const {
  return at(clamp_index(row, height_), clamp_index(col, width_));
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* field) {
    skip_separators();
    if (pos_ >= bytes_.size())
      throw DecodeError(std::string("PGM: missing ") + field);
    if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_])))
      throw DecodeError(std::string("PGM: malformed ") + field);
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000L) throw DecodeError(std::string("PGM: ") + field + " out of range");
      ++pos_;
    }
    if (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
        bytes_[pos_] != '#')
      throw DecodeError(std::string("PGM: malformed ") + field);
    return v;
  }

  std::string_view magic() {
    if (bytes_.size() < 2) throw DecodeError("PGM: missing magic");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  // Exactly one whitespace byte separates maxval from a binary raster.
  std::string_view binary_payload(std::size_t count) {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      throw DecodeError("PGM: truncated payload");
    ++pos_;
    if (bytes_.size() - pos_ < count) throw DecodeError("PGM: truncated payload");
    return bytes_.substr(pos_, count);
  }

  bool at_end() {
    skip_separators();
    return pos_ >= bytes_.size();
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(std::string_view bytes) {
  PgmReader in(bytes);
  const auto magic = in.magic();
  if (magic == "P3" || magic == "P6") throw DecodeError("PGM: magic names a color format");
  if (magic != "P2" && magic != "P5") throw DecodeError("PGM: unknown magic");
  const long width = in.read_uint("width");
  const long height = in.read_uint("height");
  const long maxval = in.read_uint("maxval");
  if (width < 1) throw DecodeError("PGM: width must be >= 1");
  if (height < 1) throw DecodeError("PGM: height must be >= 1");
  if (maxval < 1 || maxval > 255) throw DecodeError("PGM: maxval must be in [1,255]");

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint8_t> pixels(count);
  if (magic == "P5") {
    const auto raw = in.binary_payload(count);
    std::transform(raw.begin(), raw.end(), pixels.begin(),
                   [](char c) { return static_cast<std::uint8_t>(c); });
    if (std::any_of(pixels.begin(), pixels.end(), [&](std::uint8_t v) { return v > maxval; }))
      throw DecodeError("PGM: payload value exceeds maxval");
  } else {
    for (auto& p : pixels) {
      if (in.at_end()) throw DecodeError("PGM: truncated payload");
      const long v = in.read_uint("payload");
      if (v > maxval) throw DecodeError("PGM: payload value exceeds maxval");
      p = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::string write_pgm(const GrayImage& img, PgmFormat format) {
  std::ostringstream out;
  out << (format == PgmFormat::ascii ? "P2" : "P5") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << 255 << '\n';
  if (format == PgmFormat::binary) {
    const auto px = img.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  } else {
    for (int r = 0; r < img.height(); ++r) {
      for (int c = 0; c < img.width(); ++c) {
        if (c) out << ' ';
        out << static_cast<int>(img.at(r, c));
      }
      out << '\n';
    }
  }
  return std::move(out).str();
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return read_pgm(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img, PgmFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto bytes = write_pgm(img, format);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::size_t LabeledDataset::class_size(std::size_t class_index) const {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [&](const Sample& s) {
    return s.class_index == class_index;
  }));
}

namespace {

bool is_pgm(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm";
}

}  // namespace

LabeledDataset load_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IngestError("dataset root is not a directory: " + root.string());

  std::vector<std::string> classes;
  for (const auto& entry : fs::directory_iterator(root)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && !name.empty() && name.front() != '.') classes.push_back(name);
  }
  if (classes.empty()) throw IngestError("dataset root has no class directories: " + root.string());
  std::sort(classes.begin(), classes.end());

  LabeledDataset ds;
  ds.classes = classes;
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(root / classes[ci])) {
      if (entry.is_regular_file() && is_pgm(entry.path())) files.push_back(entry.path().filename().string());
    }
    if (files.empty()) throw IngestError("class has no PGM images: " + (root / classes[ci]).string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto rel = fs::path(classes[ci]) / f;
      GrayImage img;
      try {
        img = read_pgm_file(root / rel);
      } catch (const std::exception& e) {
        throw IngestError(std::string("cannot load ") + (root / rel).string() + ": " + e.what());
      }
      ds.samples.push_back({std::move(img), ci, rel});
    }
  }
  return ds;
}

}  // namespace rambp
