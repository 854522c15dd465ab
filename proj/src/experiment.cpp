#include "rambp/experiment.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rambp/baselines.hpp"
#include "rambp/parallel.hpp"
#include "rambp/rambp.hpp"
#include "rambp/rng.hpp"

namespace rambp {

using nlohmann::json;

std::string to_string(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::rambp: return "rambp";
    case DescriptorKind::lbp: return "lbp";
    case DescriptorKind::lbp_riu2: return "lbp_riu2";
    case DescriptorKind::mbp: return "mbp";
  }
  return "unknown";
}

DescriptorKind parse_descriptor(const std::string& name) {
  if (name == "rambp") return DescriptorKind::rambp;
  if (name == "lbp") return DescriptorKind::lbp;
  if (name == "lbp_riu2") return DescriptorKind::lbp_riu2;
  if (name == "mbp") return DescriptorKind::mbp;
  throw ConfigError("unknown descriptor: " + name);
}

FeatureHistogram compute_descriptor(DescriptorKind kind, const GrayImage& img, const DescriptorParams& params) {
  switch (kind) {
    case DescriptorKind::rambp: return rambp_descriptor(img, params);
    case DescriptorKind::lbp: return lbp_descriptor(img);
    case DescriptorKind::lbp_riu2: return lbp_riu2_descriptor(img);
    case DescriptorKind::mbp: return mbp_descriptor(img);
  }
  throw std::logic_error("unreachable descriptor kind");
}

// ---------------------------------------------------------------------------
// split manifests and partitions

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

SplitRole parse_role(const std::string& s) {
  if (s == "train") return SplitRole::train;
  if (s == "test") return SplitRole::test;
  if (s == "both") return SplitRole::both;
  throw ConfigError("bad split manifest: unknown role '" + s + "'");
}

}  // namespace

std::vector<ManifestEntry> parse_split_manifest(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ManifestEntry> entries;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (header) {
      if (f.size() < 2 || f[0] != "path" || f[1] != "role")
        throw ConfigError("bad split manifest: header must start with path,role");
      header = false;
      continue;
    }
    if (f.size() < 2 || f.size() > 3) throw ConfigError("bad split manifest line: " + line);
    entries.push_back({f[0], parse_role(f[1]), f.size() == 3 ? f[2] : std::string{}});
  }
  if (entries.empty()) throw ConfigError("bad split manifest: no entries");
  return entries;
}

std::vector<ManifestEntry> read_split_manifest(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open split manifest " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_split_manifest(buf.str());
}

std::vector<Partition> resolve_partitions(const LabeledDataset& ds, const SplitPolicy& split, std::uint64_t seed) {
  std::vector<Partition> parts;
  if (split.kind == SplitPolicy::Kind::random) {
    if (split.partitions < 1) throw ConfigError("random split needs >= 1 partition");
    if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0))
      throw ConfigError("train_fraction must lie in (0,1)");
    std::vector<std::vector<std::size_t>> by_class(ds.classes.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) by_class[ds.samples[i].class_index].push_back(i);
    for (int p = 0; p < split.partitions; ++p) {
      Xoshiro256 rng(mix_seed(seed, static_cast<std::uint64_t>(p)));
      Partition part;
      for (std::size_t ci = 0; ci < by_class.size(); ++ci) {
        auto members = by_class[ci];
        const auto n = members.size();
        const auto n_train = static_cast<std::size_t>(static_cast<double>(n) * split.train_fraction);
        if (n_train < 1 || n_train >= n)
          throw ConfigError("class too small to split: " + ds.classes[ci]);
        for (std::size_t i = n - 1; i > 0; --i) {
          const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
          std::swap(members[i], members[j]);
        }
        part.train.insert(part.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
        part.test.insert(part.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
      }
      std::sort(part.train.begin(), part.train.end());
      std::sort(part.test.begin(), part.test.end());
      parts.push_back(std::move(part));
    }
    return parts;
  }

  const auto entries = split.entries.empty() && !split.manifest_path.empty()
                           ? read_split_manifest(split.manifest_path)
                           : split.entries;
  if (entries.empty()) throw ConfigError("split policy needs a manifest");

  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) index_of[ds.samples[i].path.generic_string()] = i;
  auto lookup = [&](const std::string& path) {
    const auto it = index_of.find(path);
    if (it == index_of.end()) throw ConfigError("bad split manifest: unknown image " + path);
    return it->second;
  };

  if (split.kind == SplitPolicy::Kind::manifest) {
    Partition part;
    for (const auto& e : entries) {
      const auto i = lookup(e.path);
      if (e.role != SplitRole::test) part.train.push_back(i);
      if (e.role != SplitRole::train) part.test.push_back(i);
    }
    std::sort(part.train.begin(), part.train.end());
    std::sort(part.test.begin(), part.test.end());
    if (part.train.empty() || part.test.empty()) throw ConfigError("bad split manifest: empty train or test set");
    parts.push_back(std::move(part));
    return parts;
  }

  std::set<std::string> groups;
  for (const auto& e : entries) {
    if (e.group.empty()) throw ConfigError("bad split manifest: group policy needs a group for " + e.path);
    groups.insert(e.group);
  }
  if (groups.size() < 2) throw ConfigError("group split needs at least two groups");
  for (const auto& g : groups) {
    Partition part;
    for (const auto& e : entries) (e.group == g ? part.test : part.train).push_back(lookup(e.path));
    std::sort(part.train.begin(), part.train.end());
    std::sort(part.test.begin(), part.test.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

// ---------------------------------------------------------------------------
// configuration

std::vector<std::size_t> ExperimentConfig::default_ks() {
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= 39; k += 2) ks.push_back(k);
  return ks;
}

void ExperimentConfig::validate() const {
  try {
    params.validate();
    for (const auto& n : noise) n.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (k < 1 || k % 2 == 0) throw ConfigError("k must be odd and >= 1");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] % 2 == 0) throw ConfigError("ks must be odd");
    if (i && ks[i] <= ks[i - 1]) throw ConfigError("ks must be ascending");
  }
  for (int w : window_sizes)
    if (w < 3 || w % 2 == 0) throw ConfigError("window sizes must be odd and >= 3");
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; }))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

NoiseSpec noise_from_json(const json& j) {
  reject_unknown(j, {"kind", "rho", "sigma"}, "noise entry");
  NoiseSpec s;
  s.kind = parse_noise_kind(j.at("kind").get<std::string>());
  if (j.contains("rho")) s.rho = j["rho"].get<double>();
  if (j.contains("sigma")) s.sigma = j["sigma"].get<double>();
  return s;
}

json noise_to_json(const NoiseSpec& s) {
  json j{{"kind", to_string(s.kind)}};
  if (s.rho) j["rho"] = *s.rho;
  if (s.sigma) j["sigma"] = *s.sigma;
  return j;
}

std::string policy_name(SplitPolicy::Kind k) {
  switch (k) {
    case SplitPolicy::Kind::manifest: return "manifest";
    case SplitPolicy::Kind::random: return "random";
    case SplitPolicy::Kind::group: return "group";
  }
  return "unknown";
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"dataset", "descriptor", "max_window", "noise", "trials", "split", "k", "seed", "workers", "ks",
                  "window_sizes"},
                 "config");
  ExperimentConfig cfg;
  try {
    if (j.contains("dataset")) cfg.dataset = j["dataset"].get<std::string>();
    if (j.contains("descriptor")) cfg.descriptor = parse_descriptor(j["descriptor"].get<std::string>());
    if (j.contains("max_window")) cfg.params.max_window = j["max_window"].get<int>();
    if (j.contains("noise"))
      for (const auto& n : j["noise"]) cfg.noise.push_back(noise_from_json(n));
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("k")) cfg.k = j["k"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<unsigned>();
    if (j.contains("ks")) cfg.ks = j["ks"].get<std::vector<std::size_t>>();
    if (j.contains("window_sizes")) cfg.window_sizes = j["window_sizes"].get<std::vector<int>>();
    if (j.contains("split")) {
      const auto& s = j["split"];
      reject_unknown(s, {"policy", "manifest", "partitions", "train_fraction"}, "split");
      const auto policy = s.value("policy", std::string("random"));
      if (policy == "manifest") cfg.split.kind = SplitPolicy::Kind::manifest;
      else if (policy == "random") cfg.split.kind = SplitPolicy::Kind::random;
      else if (policy == "group") cfg.split.kind = SplitPolicy::Kind::group;
      else throw ConfigError("unknown split policy: " + policy);
      if (s.contains("manifest")) cfg.split.manifest_path = s["manifest"].get<std::string>();
      if (s.contains("partitions")) cfg.split.partitions = s["partitions"].get<int>();
      if (s.contains("train_fraction")) cfg.split.train_fraction = s["train_fraction"].get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["dataset"] = cfg.dataset.generic_string();
  j["descriptor"] = to_string(cfg.descriptor);
  j["max_window"] = cfg.params.max_window;
  j["noise"] = json::array();
  for (const auto& n : cfg.noise) j["noise"].push_back(noise_to_json(n));
  j["trials"] = cfg.trials;
  json s{{"policy", policy_name(cfg.split.kind)}};
  if (cfg.split.kind == SplitPolicy::Kind::random) {
    s["partitions"] = cfg.split.partitions;
    s["train_fraction"] = cfg.split.train_fraction;
  } else {
    s["manifest"] = cfg.split.manifest_path.generic_string();
  }
  j["split"] = s;
  j["k"] = cfg.k;
  j["seed"] = cfg.seed;
  j["ks"] = cfg.ks;
  j["window_sizes"] = cfg.window_sizes;
  return j.dump(2);
}

std::uint64_t derive_noise_seed(std::uint64_t master, NoiseKind kind, double parameter, int trial,
                                std::size_t image_index) {
  std::uint64_t s = mix_seed(master, static_cast<std::uint64_t>(kind));
  s = mix_seed(s, std::bit_cast<std::uint64_t>(parameter));
  s = mix_seed(s, static_cast<std::uint64_t>(trial));
  return mix_seed(s, static_cast<std::uint64_t>(image_index));
}

// ---------------------------------------------------------------------------
// result tables

void ResultTable::append(const ResultTable& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  aggregates.insert(aggregates.end(), other.aggregates.begin(), other.aggregates.end());
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  out << "max_window,noise,param,trial,accuracy\n";
  for (const auto& r : rows)
    out << r.max_window << ',' << r.noise << ',' << format_real(r.parameter) << ',' << r.trial << ','
        << format_real(r.accuracy) << '\n';
  for (const auto& a : aggregates)
    out << a.max_window << ',' << a.noise << ',' << format_real(a.parameter) << ",mean,"
        << format_real(a.mean_accuracy) << '\n';
  return std::move(out).str();
}

// ---------------------------------------------------------------------------
// protocols

namespace {

std::vector<FeatureHistogram> features_for(const std::vector<std::size_t>& indices, const ExperimentConfig& cfg,
                                           const std::function<GrayImage(std::size_t)>& image_of) {
  std::vector<FeatureHistogram> out(indices.size());
  parallel_for(indices.size(), cfg.workers, [&](std::size_t i) {
    out[i] = compute_descriptor(cfg.descriptor, image_of(indices[i]), cfg.params);
  });
  return out;
}

std::vector<std::size_t> all_indices(const LabeledDataset& ds) {
  std::vector<std::size_t> idx(ds.samples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

std::vector<std::size_t> union_of(const std::vector<Partition>& parts, bool train) {
  std::set<std::size_t> s;
  for (const auto& p : parts) s.insert((train ? p.train : p.test).begin(), (train ? p.train : p.test).end());
  return {s.begin(), s.end()};
}

// Pooled k-NN accuracy; feature(i) yields the test feature of sample i.
template <typename TestFeature>
double pooled_accuracy(const LabeledDataset& ds, const std::vector<Partition>& parts,
                       const std::map<std::size_t, FeatureHistogram>& clean, TestFeature&& test_feature,
                       const ExperimentConfig& cfg) {
  std::size_t correct = 0, total = 0;
  for (const auto& p : parts) {
    std::vector<LabeledHistogram> train;
    for (auto i : p.train) train.push_back({clean.at(i), ds.samples[i].class_index});
    if (static_cast<std::size_t>(cfg.k) > train.size()) throw ConfigError("k exceeds the training set size");
    std::vector<std::size_t> predicted(p.test.size());
    parallel_for(p.test.size(), cfg.workers, [&](std::size_t t) {
      predicted[t] = knn_classify(test_feature(p.test[t]), train, static_cast<std::size_t>(cfg.k));
    });
    for (std::size_t t = 0; t < p.test.size(); ++t) {
      correct += predicted[t] == ds.samples[p.test[t]].class_index;
      ++total;
    }
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

std::map<std::size_t, FeatureHistogram> clean_features(const LabeledDataset& ds, const std::vector<std::size_t>& idx,
                                                       const ExperimentConfig& cfg) {
  const auto feats = features_for(idx, cfg, [&](std::size_t i) { return ds.samples[i].image; });
  std::map<std::size_t, FeatureHistogram> out;
  for (std::size_t i = 0; i < idx.size(); ++i) out.emplace(idx[i], feats[i]);
  return out;
}

GrayImage noisy_copy(const LabeledDataset& ds, std::size_t i, const NoiseSpec& spec, const ExperimentConfig& cfg,
                     int trial) {
  NoiseSpec s = spec;
  s.seed = derive_noise_seed(cfg.seed, spec.kind, spec.parameter(), trial, i);
  return apply_noise(ds.samples[i].image, s);
}

void check_dataset(const LabeledDataset& ds) {
  if (ds.samples.empty() || ds.classes.empty()) throw ConfigError("empty dataset");
  for (std::size_t c = 0; c < ds.classes.size(); ++c)
    if (ds.class_size(c) == 0) throw ConfigError("empty class: " + ds.classes[c]);
}

}  // namespace

ResultTable run_noisy_classification(const LabeledDataset& ds, const ExperimentConfig& cfg) {
  cfg.validate();
  check_dataset(ds);
  if (cfg.noise.empty()) throw ConfigError("noisy classification needs at least one noise entry");
  const auto parts = resolve_partitions(ds, cfg.split, cfg.seed);
  const auto clean = clean_features(ds, union_of(parts, true), cfg);
  const auto test_idx = union_of(parts, false);

  ResultTable table;
  for (const auto& spec : cfg.noise) {
    double sum = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      const auto feats =
          features_for(test_idx, cfg, [&](std::size_t i) { return noisy_copy(ds, i, spec, cfg, t); });
      std::map<std::size_t, const FeatureHistogram*> by_index;
      for (std::size_t i = 0; i < test_idx.size(); ++i) by_index[test_idx[i]] = &feats[i];
      const double acc = pooled_accuracy(
          ds, parts, clean, [&](std::size_t i) -> const FeatureHistogram& { return *by_index.at(i); }, cfg);
      table.rows.push_back({cfg.params.max_window, to_string(spec.kind), spec.parameter(), t, acc});
      sum += acc;
    }
    table.aggregates.push_back(
        {cfg.params.max_window, to_string(spec.kind), spec.parameter(), sum / cfg.trials, cfg.trials});
  }
  return table;
}

ResultTable run_noise_free_classification(const LabeledDataset& ds, const ExperimentConfig& cfg) {
  cfg.validate();
  check_dataset(ds);
  const auto parts = resolve_partitions(ds, cfg.split, cfg.seed);
  const auto clean = clean_features(ds, all_indices(ds), cfg);
  ResultTable table;
  double sum = 0.0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const double acc = pooled_accuracy(
        ds, {parts[p]}, clean, [&](std::size_t i) -> const FeatureHistogram& { return clean.at(i); }, cfg);
    table.rows.push_back({cfg.params.max_window, "none", 0.0, static_cast<int>(p), acc});
    sum += acc;
  }
  table.aggregates.push_back(
      {cfg.params.max_window, "none", 0.0, sum / static_cast<double>(parts.size()), static_cast<int>(parts.size())});
  return table;
}

std::vector<RetrievalResult> run_retrieval(const LabeledDataset& ds, const ExperimentConfig& cfg) {
  cfg.validate();
  check_dataset(ds);
  if (cfg.noise.empty()) throw ConfigError("retrieval needs at least one noise entry");
  const auto idx = all_indices(ds);
  const auto clean = features_for(idx, cfg, [&](std::size_t i) { return ds.samples[i].image; });
  std::vector<LabeledHistogram> db;
  for (std::size_t i = 0; i < idx.size(); ++i) db.push_back({clean[i], ds.samples[i].class_index});

  std::vector<RetrievalResult> out;
  for (const auto& spec : cfg.noise) {
    std::vector<LabeledHistogram> queries;
    for (int t = 0; t < cfg.trials; ++t) {
      const auto feats = features_for(idx, cfg, [&](std::size_t i) { return noisy_copy(ds, i, spec, cfg, t); });
      for (std::size_t i = 0; i < idx.size(); ++i) queries.push_back({feats[i], ds.samples[i].class_index});
    }
    out.push_back({spec, pr_curve(queries, db, cfg.ks, cfg.workers)});
  }
  return out;
}

ResultTable sweep_window_size(const LabeledDataset& ds, const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable table;
  for (int w : cfg.window_sizes) {
    ExperimentConfig c = cfg;
    c.params.max_window = w;
    table.append(run_noisy_classification(ds, c));
  }
  return table;
}

std::string features_csv(const LabeledDataset& ds, DescriptorKind kind, const DescriptorParams& params,
                         unsigned workers) {
  std::vector<FeatureHistogram> feats(ds.samples.size());
  parallel_for(ds.samples.size(), workers,
               [&](std::size_t i) { feats[i] = compute_descriptor(kind, ds.samples[i].image, params); });
  std::ostringstream out;
  out << "path,class";
  const std::size_t bins = feats.empty() ? 0 : feats.front().size();
  for (std::size_t b = 0; b < bins; ++b) out << ",bin" << b;
  out << '\n';
  for (std::size_t i = 0; i < feats.size(); ++i) {
    out << ds.samples[i].path.generic_string() << ',' << ds.classes[ds.samples[i].class_index];
    for (double v : feats[i].bins) out << ',' << format_real(v);
    out << '\n';
  }
  return std::move(out).str();
}

}  // namespace rambp
