// Experiment driver: feature extraction, noise injection, classification,
// retrieval and window-size sweeps over a directory-per-class PGM dataset.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rambp/experiment.hpp"
#include "rambp/noise.hpp"
#include "rambp/rambp.hpp"
#include "rambp/synth.hpp"

namespace fs = std::filesystem;
using namespace rambp;

namespace {

struct ConfigFlags {
  std::string config_file;
  std::string dataset;
  std::string descriptor;
  int max_window = 5;
  std::vector<std::string> noise;
  int trials = 10;
  std::string split;
  std::string manifest;
  int partitions = 1;
  double train_fraction = 0.5;
  int k = 1;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<std::size_t> ks;
  std::vector<int> sizes;
  std::string out;

  std::map<std::string, CLI::Option*> opts;
};

NoiseSpec parse_noise_flag(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("noise flag must look like kind:value, got " + text);
  const auto kind = parse_noise_kind(text.substr(0, colon));
  const double value = std::stod(text.substr(colon + 1));
  NoiseSpec s;
  s.kind = kind;
  if (kind == NoiseKind::salt_pepper) s.rho = value;
  else s.sigma = value;
  return s;
}

void add_config_flags(CLI::App* app, ConfigFlags& f, bool with_out = true) {
  f.opts["config"] = app->add_option("--config", f.config_file, "JSON experiment config");
  f.opts["dataset"] = app->add_option("--dataset", f.dataset, "dataset root (root/<class>/<image>.pgm)");
  f.opts["descriptor"] = app->add_option("--descriptor", f.descriptor, "rambp | lbp | lbp_riu2 | mbp");
  f.opts["max_window"] = app->add_option("--max-window", f.max_window, "maximum adaptive window width");
  f.opts["noise"] = app->add_option("--noise", f.noise, "noise entry kind:value, repeatable")->expected(1, -1);
  f.opts["trials"] = app->add_option("--trials", f.trials, "noise repetitions");
  f.opts["split"] = app->add_option("--split", f.split, "manifest | random | group");
  f.opts["manifest"] = app->add_option("--manifest", f.manifest, "split manifest CSV (path,role[,group])");
  f.opts["partitions"] = app->add_option("--partitions", f.partitions, "random partitions");
  f.opts["train_fraction"] = app->add_option("--train-fraction", f.train_fraction, "random split training share");
  f.opts["k"] = app->add_option("--k", f.k, "k for k-NN (odd)");
  f.opts["seed"] = app->add_option("--seed", f.seed, "master seed");
  f.opts["workers"] = app->add_option("--workers", f.workers, "worker threads (does not affect results)");
  f.opts["ks"] = app->add_option("--ks", f.ks, "retrieval cut-offs (odd, ascending)")->delimiter(',');
  f.opts["sizes"] = app->add_option("--sizes", f.sizes, "max window sizes to sweep")->delimiter(',');
  if (with_out) app->add_option("--out", f.out, "output directory")->required();
}

ExperimentConfig resolve_config(const ConfigFlags& f) {
  ExperimentConfig cfg = f.config_file.empty() ? ExperimentConfig{} : load_config(f.config_file);
  auto set = [&](const char* name) { return f.opts.at(name)->count() > 0; };
  if (set("dataset")) cfg.dataset = f.dataset;
  if (set("descriptor")) cfg.descriptor = parse_descriptor(f.descriptor);
  if (set("max_window")) cfg.params.max_window = f.max_window;
  if (set("noise")) {
    cfg.noise.clear();
    for (const auto& n : f.noise) cfg.noise.push_back(parse_noise_flag(n));
  }
  if (set("trials")) cfg.trials = f.trials;
  if (set("split")) {
    if (f.split == "manifest") cfg.split.kind = SplitPolicy::Kind::manifest;
    else if (f.split == "random") cfg.split.kind = SplitPolicy::Kind::random;
    else if (f.split == "group") cfg.split.kind = SplitPolicy::Kind::group;
    else throw ConfigError("unknown split policy: " + f.split);
  }
  if (set("manifest")) cfg.split.manifest_path = f.manifest;
  if (set("partitions")) cfg.split.partitions = f.partitions;
  if (set("train_fraction")) cfg.split.train_fraction = f.train_fraction;
  if (set("k")) cfg.k = f.k;
  if (set("seed")) cfg.seed = f.seed;
  if (set("workers")) cfg.workers = f.workers;
  if (set("ks")) cfg.ks = f.ks;
  if (set("sizes")) cfg.window_sizes = f.sizes;
  cfg.validate();
  if (cfg.dataset.empty()) throw ConfigError("no dataset given (--dataset or config)");
  if (!fs::is_directory(cfg.dataset)) throw ConfigError("dataset root does not exist: " + cfg.dataset.string());
  if (cfg.split.kind != SplitPolicy::Kind::random && !fs::exists(cfg.split.manifest_path))
    throw ConfigError("split manifest does not exist: " + cfg.split.manifest_path.string());
  return cfg;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

void write_manifest(const fs::path& dir, const std::string& command, const ExperimentConfig& cfg,
                    const std::vector<std::string>& outputs) {
  nlohmann::json m;
  m["software"] = kSoftwareVersion;
  m["command"] = command;
  m["config"] = nlohmann::json::parse(config_to_json(cfg));
  m["outputs"] = outputs;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::string noise_tag(const NoiseSpec& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%g", to_string(s.kind).c_str(), s.parameter());
  return buf;
}

GrayImage to_gray(const std::vector<double>& values, int w, int h) {
  GrayImage img(w, h);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = static_cast<std::uint8_t>(std::clamp(std::round(values[i]), 0.0, 255.0));
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-robust texture descriptors and evaluation protocols"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate the synthetic texture dataset");
  std::string synth_out;
  SynthOptions synth_opts;
  synth->add_option("--out", synth_out, "output dataset root")->required();
  synth->add_option("--per-class", synth_opts.per_class, "images per class");
  synth->add_option("--size", synth_opts.size, "image width and height");
  synth->add_option("--seed", synth_opts.seed, "generator seed");
  std::string synth_preset = "default";
  synth->add_option("--preset", synth_preset, "class set: default | coarse")
      ->check(CLI::IsMember({"default", "coarse"}));

  // extract
  auto* extract = app.add_subcommand("extract", "images -> feature CSV");
  ConfigFlags extract_flags;
  add_config_flags(extract, extract_flags, false);
  std::string extract_out;
  extract->add_option("--out", extract_out, "feature CSV file")->required();

  // noise
  auto* noise = app.add_subcommand("noise", "apply a noise model and write PGMs");
  std::string noise_input, noise_out, noise_kind;
  std::optional<double> noise_rho, noise_sigma;
  std::uint64_t noise_seed = 1;
  noise->add_option("--input", noise_input, "PGM image or dataset root")->required();
  noise->add_option("--kind", noise_kind, "salt_pepper | gaussian_noise | gaussian_blur")->required();
  noise->add_option("--rho", noise_rho, "salt-and-pepper density");
  noise->add_option("--sigma", noise_sigma, "Gaussian standard deviation");
  noise->add_option("--seed", noise_seed, "noise seed");
  noise->add_option("--out", noise_out, "output directory")->required();

  // classify
  auto* classify = app.add_subcommand("classify", "noisy or noise-free k-NN classification");
  ConfigFlags classify_flags;
  add_config_flags(classify, classify_flags);
  std::string protocol = "noisy";
  classify->add_option("--protocol", protocol, "noisy | noise-free")->check(CLI::IsMember({"noisy", "noise-free"}));

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "noisy-query retrieval, recall/precision curves");
  ConfigFlags retrieve_flags;
  add_config_flags(retrieve, retrieve_flags);

  // sweep-window
  auto* sweep = app.add_subcommand("sweep-window", "noisy classification across max window sizes");
  ConfigFlags sweep_flags;
  add_config_flags(sweep, sweep_flags);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "dump mask, thresholds, window sizes and codes of one image");
  std::string inspect_image, inspect_out;
  int inspect_window = 5;
  inspect->add_option("--image", inspect_image, "PGM image")->required();
  inspect->add_option("--max-window", inspect_window, "maximum adaptive window width");
  inspect->add_option("--out", inspect_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      if (synth_preset == "coarse") synth_opts.classes = SynthOptions::coarse_classes();
      write_synth_dataset(synth_out, synth_opts);
      std::cout << "wrote " << synth_opts.classes.size() * static_cast<std::size_t>(synth_opts.per_class)
                << " images to " << synth_out << "\n";
    } else if (*extract) {
      const auto cfg = resolve_config(extract_flags);
      const auto ds = load_dataset(cfg.dataset);
      write_text(extract_out, features_csv(ds, cfg.descriptor, cfg.params, cfg.workers));
    } else if (*noise) {
      NoiseSpec spec;
      spec.kind = parse_noise_kind(noise_kind);
      spec.rho = noise_rho;
      spec.sigma = noise_sigma;
      spec.seed = noise_seed;
      spec.validate();
      fs::create_directories(noise_out);
      if (fs::is_directory(noise_input)) {
        const auto ds = load_dataset(noise_input);
        for (std::size_t i = 0; i < ds.samples.size(); ++i) {
          NoiseSpec s = spec;
          s.seed = derive_noise_seed(noise_seed, spec.kind, spec.parameter(), 0, i);
          const auto dst = fs::path(noise_out) / ds.samples[i].path;
          fs::create_directories(dst.parent_path());
          write_pgm_file(dst, apply_noise(ds.samples[i].image, s));
        }
      } else {
        const auto img = read_pgm_file(noise_input);
        write_pgm_file(fs::path(noise_out) / fs::path(noise_input).filename(), apply_noise(img, spec));
      }
    } else if (*classify) {
      const auto cfg = resolve_config(classify_flags);
      const auto ds = load_dataset(cfg.dataset);
      const auto table =
          protocol == "noisy" ? run_noisy_classification(ds, cfg) : run_noise_free_classification(ds, cfg);
      fs::create_directories(classify_flags.out);
      write_text(fs::path(classify_flags.out) / "classification.csv", table.to_csv());
      write_manifest(classify_flags.out, "classify --protocol " + protocol, cfg, {"classification.csv"});
      for (const auto& a : table.aggregates)
        std::cout << a.noise << ' ' << a.parameter << ": mean accuracy " << a.mean_accuracy << "\n";
    } else if (*retrieve) {
      const auto cfg = resolve_config(retrieve_flags);
      const auto ds = load_dataset(cfg.dataset);
      fs::create_directories(retrieve_flags.out);
      std::vector<std::string> files;
      for (const auto& r : run_retrieval(ds, cfg)) {
        const auto name = "retrieval_" + noise_tag(r.noise) + ".csv";
        write_text(fs::path(retrieve_flags.out) / name, pr_curve_csv(r.curve));
        files.push_back(name);
      }
      write_manifest(retrieve_flags.out, "retrieve", cfg, files);
    } else if (*sweep) {
      const auto cfg = resolve_config(sweep_flags);
      const auto ds = load_dataset(cfg.dataset);
      fs::create_directories(sweep_flags.out);
      write_text(fs::path(sweep_flags.out) / "window_sweep.csv", sweep_window_size(ds, cfg).to_csv());
      write_manifest(sweep_flags.out, "sweep-window", cfg, {"window_sweep.csv"});
    } else if (*inspect) {
      const auto img = read_pgm_file(inspect_image);
      const auto a = analyze(img, {inspect_window});
      const fs::path dir(inspect_out);
      fs::create_directories(dir);
      write_pgm_file(dir / "mask.pgm", a.mask.to_image());
      write_pgm_file(dir / "threshold.pgm", to_gray(a.thresholds.thresholds(), img.width(), img.height()));
      std::vector<double> ws(a.thresholds.window_sizes().begin(), a.thresholds.window_sizes().end());
      write_pgm_file(dir / "window.pgm", to_gray(ws, img.width(), img.height()));
      std::vector<double> codes(a.codes.codes.begin(), a.codes.codes.end());
      write_pgm_file(dir / "codes.pgm", to_gray(codes, img.width(), img.height()));
      std::cout << "corrupted pixels: " << a.mask.corrupted_count() << " of " << img.size() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
