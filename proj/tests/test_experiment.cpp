#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "rambp/experiment.hpp"
#include "rambp/synth.hpp"
#include "support.hpp"

using namespace rambp;
namespace fs = std::filesystem;

namespace {

LabeledDataset small_synth(int per_class = 6, int size = 32) {
  SynthOptions o;
  o.per_class = per_class;
  o.size = size;
  return synth_dataset(o);
}

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.trials = 2;
  cfg.split.kind = SplitPolicy::Kind::random;
  cfg.ks = {1, 3, 5};
  return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"({
    "dataset": "data/x", "descriptor": "mbp", "max_window": 7,
    "noise": [{"kind": "salt_pepper", "rho": 0.3}, {"kind": "gaussian_blur", "sigma": 1.25}],
    "trials": 3, "k": 3, "seed": 99, "workers": 4, "ks": [1, 3],
    "split": {"policy": "random", "partitions": 5, "train_fraction": 0.5},
    "window_sizes": [3, 5]
  })");
  CHECK(cfg.dataset == fs::path("data/x"));
  CHECK(cfg.descriptor == DescriptorKind::mbp);
  CHECK(cfg.params.max_window == 7);
  REQUIRE(cfg.noise.size() == 2);
  CHECK(cfg.noise[0].kind == NoiseKind::salt_pepper);
  CHECK(*cfg.noise[0].rho == 0.3);
  CHECK(*cfg.noise[1].sigma == 1.25);
  CHECK(cfg.trials == 3);
  CHECK(cfg.k == 3);
  CHECK(cfg.seed == 99);
  CHECK(cfg.workers == 4);
  CHECK(cfg.split.partitions == 5);
  CHECK(cfg.window_sizes == std::vector<int>{3, 5});
  // workers never reach the echo
  CHECK(config_to_json(cfg).find("workers") == std::string::npos);
  const auto again = parse_config(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
}

TEST_CASE("config rejections") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"colour": 1})"), doctest::Contains("colour"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"split": {"policy": "random", "folds": 2}})"), doctest::Contains("folds"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"noise": [{"kind": "salt_pepper", "rho": 0.1, "seed": 3}]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"descriptor": "sift"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"k": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"trials": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"max_window": 4})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"noise": [{"kind": "salt_pepper", "rho": 1.5}]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"noise": [{"kind": "gaussian_noise", "rho": 0.1}]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"ks": [1, 4]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"trials": "many"})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("split manifest parsing") {
  const auto e = parse_split_manifest("path,role,group\na/1.pgm,train,g0\na/2.pgm,test,g1\nb/1.pgm,both,g0\n");
  REQUIRE(e.size() == 3);
  CHECK(e[0].role == SplitRole::train);
  CHECK(e[2].role == SplitRole::both);
  CHECK(e[1].group == "g1");
  CHECK_THROWS_AS(parse_split_manifest("file,kind\na,train\n"), ConfigError);
  CHECK_THROWS_AS(parse_split_manifest("path,role\na,validate\n"), ConfigError);
  CHECK_THROWS_AS(parse_split_manifest("path,role\n"), ConfigError);
}

TEST_CASE("random partitions") {
  const auto ds = small_synth(6);
  SplitPolicy split;
  split.partitions = 4;
  const auto parts = resolve_partitions(ds, split, 5);
  REQUIRE(parts.size() == 4);
  for (const auto& p : parts) {
    CHECK(p.train.size() == 15);
    CHECK(p.test.size() == 15);
    std::vector<std::size_t> all = p.train;
    all.insert(all.end(), p.test.begin(), p.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
    for (std::size_t c = 0; c < ds.classes.size(); ++c)
      CHECK(std::count_if(p.train.begin(), p.train.end(), [&](auto i) { return ds.samples[i].class_index == c; }) == 3);
  }
  CHECK(parts[0].train != parts[1].train);
  const auto again = resolve_partitions(ds, split, 5);
  for (std::size_t i = 0; i < parts.size(); ++i) CHECK(again[i].train == parts[i].train);

  LabeledDataset tiny;
  tiny.classes = {"a"};
  tiny.samples.push_back({GrayImage(4, 4, 1), 0, "a/x.pgm"});
  CHECK_THROWS_WITH_AS(resolve_partitions(tiny, split, 1), doctest::Contains("too small"), ConfigError);
}

TEST_CASE("manifest and group partitions") {
  const auto ds = small_synth(4);
  SplitPolicy split;
  split.kind = SplitPolicy::Kind::manifest;
  for (const auto& s : ds.samples) split.entries.push_back({s.path.generic_string(), SplitRole::both, ""});
  auto parts = resolve_partitions(ds, split, 1);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].train.size() == ds.samples.size());
  CHECK(parts[0].test.size() == ds.samples.size());

  split.entries.push_back({"nope/ghost.pgm", SplitRole::train, ""});
  CHECK_THROWS_WITH_AS(resolve_partitions(ds, split, 1), doctest::Contains("bad split manifest"), ConfigError);

  split.kind = SplitPolicy::Kind::group;
  split.entries.clear();
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    split.entries.push_back({ds.samples[i].path.generic_string(), SplitRole::test, "g" + std::to_string(i % 4)});
  parts = resolve_partitions(ds, split, 1);
  REQUIRE(parts.size() == 4);
  for (const auto& p : parts) {
    CHECK(p.test.size() == 5);
    CHECK(p.train.size() == 15);
  }
}

TEST_CASE("manifest split read from disk") {
  const auto root = fs::temp_directory_path() / "rambp_test_manifest";
  fs::remove_all(root);
  SynthOptions o;
  o.per_class = 4;
  o.size = 24;
  write_synth_dataset(root, o);
  const auto ds = load_dataset(root);
  ExperimentConfig cfg = base_config();
  cfg.split.kind = SplitPolicy::Kind::manifest;
  cfg.split.manifest_path = root / "split.csv";
  const auto parts = resolve_partitions(ds, cfg.split, 1);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].train.size() == 10);
  CHECK(parts[0].test.size() == 10);
  // the generator writes exactly what it would have returned in memory
  const auto mem = synth_dataset(o);
  REQUIRE(mem.samples.size() == ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    CHECK(ds.samples[i].image == mem.samples[i].image);
    CHECK(ds.samples[i].path == mem.samples[i].path);
  }
}

TEST_CASE("zero-density noise reproduces the noise-free accuracy") {
  const auto ds = small_synth(6);
  for (auto d : {DescriptorKind::rambp, DescriptorKind::lbp}) {
    auto cfg = base_config();
    cfg.descriptor = d;
    cfg.noise = {NoiseSpec::salt_pepper(0.0)};
    const auto noisy = run_noisy_classification(ds, cfg);
    const auto clean = run_noise_free_classification(ds, cfg);
    for (const auto& r : noisy.rows) CHECK(r.accuracy == clean.rows[0].accuracy);
  }
}

TEST_CASE("duplicated images classify perfectly") {
  LabeledDataset ds;
  for (int c = 0; c < 4; ++c) {
    ds.classes.push_back("c" + std::to_string(c));
    const auto img = testing::random_image(20, 20, c);
    ds.samples.push_back({img, static_cast<std::size_t>(c), "c/0.pgm"});
    ds.samples.push_back({img, static_cast<std::size_t>(c), "c/1.pgm"});
  }
  auto cfg = base_config();
  cfg.split.partitions = 3;
  for (auto d : {DescriptorKind::rambp, DescriptorKind::lbp, DescriptorKind::lbp_riu2, DescriptorKind::mbp}) {
    cfg.descriptor = d;
    const auto t = run_noise_free_classification(ds, cfg);
    CHECK(t.aggregates[0].mean_accuracy == 1.0);
    CHECK(t.rows.size() == 3);
  }
}

TEST_CASE("self-match through a both-roles manifest") {
  const auto ds = small_synth(3);
  auto cfg = base_config();
  cfg.split.kind = SplitPolicy::Kind::manifest;
  for (const auto& s : ds.samples) cfg.split.entries.push_back({s.path.generic_string(), SplitRole::both, ""});
  CHECK(run_noise_free_classification(ds, cfg).aggregates[0].mean_accuracy == 1.0);
}

TEST_CASE("trial zero does not depend on the trial count") {
  const auto ds = small_synth(4);
  auto cfg = base_config();
  cfg.noise = {NoiseSpec::salt_pepper(0.3)};
  cfg.trials = 1;
  const auto one = run_noisy_classification(ds, cfg);
  cfg.trials = 3;
  const auto three = run_noisy_classification(ds, cfg);
  CHECK(one.rows[0].accuracy == three.rows[0].accuracy);
  double sum = 0;
  for (const auto& r : three.rows) sum += r.accuracy;
  CHECK(std::abs(three.aggregates[0].mean_accuracy - sum / 3) <= 1e-12);
}

TEST_CASE("noise seeds differ per trial and image") {
  std::set<std::uint64_t> seen;
  for (int t = 0; t < 10; ++t)
    for (std::size_t i = 0; i < 100; ++i) seen.insert(derive_noise_seed(1, NoiseKind::salt_pepper, 0.3, t, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_noise_seed(1, NoiseKind::salt_pepper, 0.3, 0, 0) != derive_noise_seed(1, NoiseKind::salt_pepper, 0.05, 0, 0));
  CHECK(derive_noise_seed(1, NoiseKind::gaussian_noise, 5, 0, 0) != derive_noise_seed(1, NoiseKind::gaussian_blur, 5, 0, 0));
}

TEST_CASE("worker count never changes results") {
  const auto ds = small_synth(4);
  auto cfg = base_config();
  cfg.noise = {NoiseSpec::salt_pepper(0.2), NoiseSpec::gaussian_noise(5.0)};
  cfg.window_sizes = {3, 5};
  auto parallel = cfg;
  parallel.workers = 8;
  CHECK(run_noisy_classification(ds, cfg).to_csv() == run_noisy_classification(ds, parallel).to_csv());
  CHECK(sweep_window_size(ds, cfg).to_csv() == sweep_window_size(ds, parallel).to_csv());
  CHECK(pr_curve_csv(run_retrieval(ds, cfg)[1].curve) == pr_curve_csv(run_retrieval(ds, parallel)[1].curve));
  CHECK(features_csv(ds, DescriptorKind::rambp, {5}, 1) == features_csv(ds, DescriptorKind::rambp, {5}, 8));
}

TEST_CASE("retrieval identities") {
  const auto ds = small_synth(4);
  auto cfg = base_config();
  cfg.noise = {NoiseSpec::salt_pepper(0.0)};
  const auto r = run_retrieval(ds, cfg);
  CHECK(r[0].curve.precision[0] == 1.0);
  for (std::size_t i = 1; i < r[0].curve.ks.size(); ++i) CHECK(r[0].curve.recall[i] >= r[0].curve.recall[i - 1]);

  LabeledDataset one;
  one.classes = {"only"};
  for (int i = 0; i < 5; ++i) one.samples.push_back({testing::random_image(16, 16, i), 0, "only/x.pgm"});
  cfg.ks = {1};
  const auto single = run_retrieval(one, cfg);
  CHECK(std::abs(single[0].curve.recall[0] - 1.0 / 5) <= 1e-12);
}

TEST_CASE("retrieval equals a hand-run of ranking and recall") {
  const auto ds = small_synth(4, 24);
  const std::vector<std::string> keep = {ds.classes[0], ds.classes[1], ds.classes[3]};
  LabeledDataset three;
  three.classes = keep;
  for (const auto& s : ds.samples)
    for (std::size_t c = 0; c < keep.size(); ++c)
      if (ds.classes[s.class_index] == keep[c]) three.samples.push_back({s.image, c, s.path});
  auto cfg = base_config();
  cfg.noise = {NoiseSpec::salt_pepper(0.3)};
  cfg.ks = {1, 3, 5, 7, 9, 11};
  const auto got = run_retrieval(three, cfg)[0].curve;

  std::vector<LabeledHistogram> db;
  for (const auto& s : three.samples) db.push_back({compute_descriptor(cfg.descriptor, s.image, cfg.params), s.class_index});
  std::vector<double> recall(cfg.ks.size(), 0.0), precision(cfg.ks.size(), 0.0);
  double n = 0;
  for (int t = 0; t < cfg.trials; ++t)
    for (std::size_t i = 0; i < three.samples.size(); ++i) {
      const auto spec = NoiseSpec::salt_pepper(0.3, derive_noise_seed(cfg.seed, NoiseKind::salt_pepper, 0.3, t, i));
      const LabeledHistogram q{compute_descriptor(cfg.descriptor, apply_noise(three.samples[i].image, spec), cfg.params),
                               three.samples[i].class_index};
      const auto ranked = rank_references(q, db);
      for (std::size_t j = 0; j < cfg.ks.size(); ++j) {
        const auto rp = recall_precision(ranked, cfg.ks[j], three.class_size(q.label));
        recall[j] += rp.recall;
        precision[j] += rp.precision;
      }
      n += 1;
    }
  for (std::size_t j = 0; j < cfg.ks.size(); ++j) {
    CHECK(std::abs(got.recall[j] - recall[j] / n) <= 1e-12);
    CHECK(std::abs(got.precision[j] - precision[j] / n) <= 1e-12);
  }
}

TEST_CASE("window sweep bookkeeping") {
  const auto ds = small_synth(4);
  auto cfg = base_config();
  cfg.noise = {NoiseSpec::salt_pepper(0.2)};
  cfg.window_sizes = {5};
  CHECK(sweep_window_size(ds, cfg).to_csv() == run_noisy_classification(ds, cfg).to_csv());

  LabeledDataset flat;
  for (int c = 0; c < 2; ++c) {
    flat.classes.push_back("flat" + std::to_string(c));
    for (int i = 0; i < 4; ++i)
      flat.samples.push_back({GrayImage(16, 16, static_cast<std::uint8_t>(60 + 100 * c)), static_cast<std::size_t>(c), "f.pgm"});
  }
  cfg.window_sizes = {3, 5, 7};
  const auto t = sweep_window_size(flat, cfg);
  REQUIRE(t.aggregates.size() == 3);
  CHECK(t.aggregates[0].mean_accuracy == t.aggregates[1].mean_accuracy);
  CHECK(t.aggregates[1].mean_accuracy == t.aggregates[2].mean_accuracy);
}

TEST_CASE("result csv layout") {
  ResultTable t;
  t.rows.push_back({5, "salt_pepper", 0.3, 0, 0.5});
  t.aggregates.push_back({5, "salt_pepper", 0.3, 0.5, 1});
  CHECK(t.to_csv() == "max_window,noise,param,trial,accuracy\n5,salt_pepper,0.29999999999999999,0,0.5\n"
                      "5,salt_pepper,0.29999999999999999,mean,0.5\n");
  const auto ds = small_synth(2, 16);
  const auto csv = features_csv(ds, DescriptorKind::lbp_riu2, {5}, 1);
  CHECK(csv.rfind("path,class,bin0,bin1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("empty classes are rejected") {
  LabeledDataset ds;
  ds.classes = {"a", "b"};
  ds.samples.push_back({GrayImage(8, 8, 1), 0, "a/1.pgm"});
  ds.samples.push_back({GrayImage(8, 8, 1), 0, "a/2.pgm"});
  auto cfg = base_config();
  CHECK_THROWS_AS(run_noise_free_classification(ds, cfg), ConfigError);
}
