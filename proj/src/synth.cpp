#include "rambp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "rambp/noise.hpp"
#include "rambp/rng.hpp"

namespace rambp {

std::vector<SynthClass> SynthOptions::default_classes() {
  return {
      {"grating_000_p6", 0.0, 6.0, 60.0, 2.0, 4.0},
      {"grating_090_p8", 90.0, 8.0, 60.0, 2.0, 4.0},
      {"grating_045_p12", 45.0, 12.0, 60.0, 2.0, 4.0},
      {"field_s1", 0.0, 0.0, 60.0, 1.0, 4.0},
      {"field_s3", 0.0, 0.0, 60.0, 3.0, 4.0},
  };
}

std::vector<SynthClass> SynthOptions::coarse_classes() {
  return {
      {"grating_000_p16", 0.0, 16.0, 60.0, 2.0, 4.0},
      {"grating_090_p20", 90.0, 20.0, 60.0, 2.0, 4.0},
      {"grating_045_p24", 45.0, 24.0, 60.0, 2.0, 4.0},
      {"field_s3", 0.0, 0.0, 60.0, 3.0, 4.0},
      {"field_s6", 0.0, 0.0, 60.0, 6.0, 4.0},
  };
}

namespace {

// Periodic white noise smoothed by an oriented Gaussian kernel, then
// standardized to zero mean and unit variance.
std::vector<double> random_field(int size, double scale, double anisotropy, double theta, Xoshiro256& rng) {
  const auto n = static_cast<std::size_t>(size) * size;
  std::vector<double> white(n);
  for (auto& v : white) v = rng.normal();

  const double su = scale * anisotropy, sv = scale;
  const int radius = static_cast<int>(std::ceil(3.0 * std::max(su, sv)));
  const double ct = std::cos(theta), st = std::sin(theta);
  const int kw = 2 * radius + 1;
  std::vector<double> kernel(static_cast<std::size_t>(kw) * kw);
  for (int dr = -radius; dr <= radius; ++dr)
    for (int dc = -radius; dc <= radius; ++dc) {
      const double u = dc * ct - dr * st, v = dc * st + dr * ct;
      kernel[(dr + radius) * kw + (dc + radius)] = std::exp(-0.5 * (u * u / (su * su) + v * v / (sv * sv)));
    }
  auto wrap = [size](int i) { return ((i % size) + size) % size; };
  std::vector<double> out(n);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      double acc = 0.0;
      for (int dr = -radius; dr <= radius; ++dr)
        for (int dc = -radius; dc <= radius; ++dc)
          acc += kernel[(dr + radius) * kw + (dc + radius)] * white[wrap(r + dr) * size + wrap(c + dc)];
      out[r * size + c] = acc;
    }

  double mean = 0.0, sq = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(n);
  for (double v : out) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(n));
  for (auto& v : out) v = (v - mean) / (sd > 0 ? sd : 1.0);
  return out;
}

}  // namespace

GrayImage synth_texture(const SynthClass& cls, int size, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("synthetic image size must be >= 1");
  Xoshiro256 rng(seed);
  const double amplitude = cls.amplitude * (0.9 + 0.2 * rng.uniform());
  // theta measured counter-clockwise from the column axis, rows grow downward
  const double theta = (cls.orientation_deg + 8.0 * (rng.uniform() - 0.5)) * std::numbers::pi / 180.0;
  std::vector<double> base(static_cast<std::size_t>(size) * size);
  if (cls.period > 0.0) {
    const double period = cls.period * (0.95 + 0.1 * rng.uniform());
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) {
        const double u = c * std::cos(theta) - r * std::sin(theta);
        base[r * size + c] = std::sin(2.0 * std::numbers::pi * u / period + phase);
      }
  } else {
    base = random_field(size, cls.field_scale, cls.anisotropy, theta, rng);
  }
  GrayImage img(size, size);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double v = 128.0 + amplitude * base[i] + cls.grain * rng.normal();
    px[i] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
  }
  return img;
}

LabeledDataset synth_dataset(const SynthOptions& options) {
  if (options.classes.empty() || options.per_class < 1) throw std::invalid_argument("empty synthetic dataset");
  // Same ordering as load_dataset gives the written copy; seeds follow the
  // declared class index.
  std::vector<std::size_t> order(options.classes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return options.classes[a].name < options.classes[b].name; });
  LabeledDataset ds;
  for (auto ci : order) ds.classes.push_back(options.classes[ci].name);
  for (std::size_t label = 0; label < order.size(); ++label) {
    const auto ci = order[label];
    for (int j = 0; j < options.per_class; ++j) {
      const auto seed = mix_seed(mix_seed(options.seed, ci), static_cast<std::uint64_t>(j));
      char name[64];
      std::snprintf(name, sizeof name, "%s_%03d.pgm", options.classes[ci].name.c_str(), j);
      ds.samples.push_back({synth_texture(options.classes[ci], options.size, seed), label,
                            std::filesystem::path(options.classes[ci].name) / name});
    }
  }
  return ds;
}

void write_synth_dataset(const std::filesystem::path& root, const SynthOptions& options) {
  namespace fs = std::filesystem;
  const auto ds = synth_dataset(options);
  for (const auto& c : ds.classes) fs::create_directories(root / c);
  std::ofstream split(root / "split.csv", std::ios::binary);
  if (!split) throw std::runtime_error("cannot write " + (root / "split.csv").string());
  split << "path,role,group\n";
  const int train = options.per_class / 2;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    write_pgm_file(root / s.path, s.image);
    const int j = static_cast<int>(i % static_cast<std::size_t>(options.per_class));
    split << s.path.generic_string() << ',' << (j < train ? "train" : "test") << ",g" << (j % 4) << '\n';
  }
}

}  // namespace rambp
