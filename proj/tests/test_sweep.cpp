#include <doctest.h>

#include "rambp/experiment.hpp"
#include "rambp/synth.hpp"

using namespace rambp;

// Larger windows pay off under heavy impulse noise once textures are coarse
// enough for a 7x7 median to stay inside one structure.
TEST_CASE("accuracy does not drop as the maximum window grows") {
  SynthOptions o;
  o.classes = SynthOptions::coarse_classes();
  o.size = 128;
  o.per_class = 20;
  const auto ds = synth_dataset(o);
  ExperimentConfig cfg;
  cfg.split.kind = SplitPolicy::Kind::random;
  cfg.trials = 3;
  cfg.noise = {NoiseSpec::salt_pepper(0.5)};
  cfg.window_sizes = {3, 5, 7};
  const auto t = sweep_window_size(ds, cfg);
  REQUIRE(t.aggregates.size() == 3);
  MESSAGE("W3 ", t.aggregates[0].mean_accuracy, " W5 ", t.aggregates[1].mean_accuracy, " W7 ",
          t.aggregates[2].mean_accuracy);
  CHECK(t.aggregates[1].mean_accuracy >= t.aggregates[0].mean_accuracy);
  CHECK(t.aggregates[2].mean_accuracy >= t.aggregates[1].mean_accuracy);
  CHECK(t.aggregates[2].mean_accuracy > t.aggregates[0].mean_accuracy);
}
