#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rambp/image.hpp"

namespace rambp {

/// One synthetic texture class: an oriented sinusoidal grating, or (when
/// `period` is 0) a smoothed random field, plus i.i.d. grain noise.
struct SynthClass {
  std::string name;
  double orientation_deg = 0.0;
  double period = 8.0;       // pixels; 0 selects the random-field texture
  double amplitude = 60.0;   // gray levels
  double field_scale = 2.0;  // smoothing sigma of the random field, pixels
  double grain = 4.0;        // stddev of per-pixel grain noise
  double anisotropy = 1.0;   // random field: smoothing along / across the orientation
};

struct SynthOptions {
  std::vector<SynthClass> classes = default_classes();
  int per_class = 50;
  int size = 64;
  std::uint64_t seed = 2024;

  /// Fine-scale gratings and fields; LBP collapses under impulse noise.
  static std::vector<SynthClass> default_classes();
  /// Structures at 3-24 pixel scale, meant for 128x128 images and large
  /// max-window sweeps.
  static std::vector<SynthClass> coarse_classes();
};

/// Deterministic in (options); image j of class i uses its own seed stream.
GrayImage synth_texture(const SynthClass& cls, int size, std::uint64_t seed);

LabeledDataset synth_dataset(const SynthOptions& options);

/// Writes `root/<class>/<class>_<nn>.pgm` and `root/split.csv`, where the
/// first half of each class is the training set and the rest the test set.
void write_synth_dataset(const std::filesystem::path& root, const SynthOptions& options);

}  // namespace rambp
