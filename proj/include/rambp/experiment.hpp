#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rambp/histogram.hpp"
#include "rambp/image.hpp"
#include "rambp/metrics.hpp"
#include "rambp/noise.hpp"
#include "rambp/threshold_map.hpp"

namespace rambp {

inline constexpr const char* kSoftwareVersion = "rambp 1.0.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DescriptorKind { rambp, lbp, lbp_riu2, mbp };

std::string to_string(DescriptorKind kind);
DescriptorKind parse_descriptor(const std::string& name);

FeatureHistogram compute_descriptor(DescriptorKind kind, const GrayImage& img, const DescriptorParams& params);

enum class SplitRole { train, test, both };

struct ManifestEntry {
  std::string path;  // relative to the dataset root, '/' separated
  SplitRole role = SplitRole::test;
  std::string group;
};

/// CSV with header `path,role[,group]`; role is train, test or both.
std::vector<ManifestEntry> read_split_manifest(const std::filesystem::path& file);
std::vector<ManifestEntry> parse_split_manifest(const std::string& text);

struct SplitPolicy {
  enum class Kind { manifest, random, group };
  Kind kind = Kind::random;
  std::filesystem::path manifest_path;
  std::vector<ManifestEntry> entries;  // manifest and group policies
  int partitions = 1;                  // random policy
  double train_fraction = 0.5;         // random policy
};

struct Partition {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Manifest: one partition from the roles. Random: per class, a seeded
/// Fisher-Yates shuffle; the first floor(n * fraction) go to training.
/// Group: one partition per distinct group (sorted), holding that group out.
std::vector<Partition> resolve_partitions(const LabeledDataset& ds, const SplitPolicy& split,
                                          std::uint64_t seed);

struct ExperimentConfig {
  std::filesystem::path dataset;
  DescriptorKind descriptor = DescriptorKind::rambp;
  DescriptorParams params;
  std::vector<NoiseSpec> noise;  // seeds inside are ignored; derived per image
  int trials = 10;
  SplitPolicy split;
  int k = 1;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<std::size_t> ks = default_ks();
  std::vector<int> window_sizes = {3, 5, 7};

  static std::vector<std::size_t> default_ks();  // 1, 3, ..., 39
  void validate() const;
};

/// Parses the JSON config document. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
/// JSON echo of every field that can influence results (workers excluded).
std::string config_to_json(const ExperimentConfig& cfg);

/// Seed of the noise applied to image `image_index` in trial `trial`.
std::uint64_t derive_noise_seed(std::uint64_t master, NoiseKind kind, double parameter, int trial,
                                std::size_t image_index);

struct ResultRow {
  int max_window = 5;
  std::string noise = "none";
  double parameter = 0.0;
  int trial = 0;  // trial or partition index
  double accuracy = 0.0;
};

struct AggregateRow {
  int max_window = 5;
  std::string noise = "none";
  double parameter = 0.0;
  double mean_accuracy = 0.0;
  int count = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;

  void append(const ResultTable& other);
  /// Header `max_window,noise,param,trial,accuracy`; aggregate rows carry
  /// `mean` in the trial column.
  std::string to_csv() const;
};

/// Clean training features, noisy test features per (noise, trial),
/// k-NN accuracy pooled over all partitions of the split.
ResultTable run_noisy_classification(const LabeledDataset& ds, const ExperimentConfig& cfg);

/// Accuracy per partition of the split, plus the mean.
ResultTable run_noise_free_classification(const LabeledDataset& ds, const ExperimentConfig& cfg);

struct RetrievalResult {
  NoiseSpec noise;
  PrCurve curve;
};

/// Database: clean features of every image. Queries: noisy copies of every
/// image over all trials. One averaged curve per noise entry.
std::vector<RetrievalResult> run_retrieval(const LabeledDataset& ds, const ExperimentConfig& cfg);

/// run_noisy_classification repeated for each max window size.
ResultTable sweep_window_size(const LabeledDataset& ds, const ExperimentConfig& cfg);

/// Feature CSV: header `path,class,bin0..`, one row per image.
std::string features_csv(const LabeledDataset& ds, DescriptorKind kind, const DescriptorParams& params,
                         unsigned workers);

}  // namespace rambp
