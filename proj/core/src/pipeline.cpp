#include "absnav/pipeline.hpp"

namespace absnav {

AgileTrainResult train_agile_policy(const AppConfig& cfg, std::uint64_t seed) {
  const SimConfig sim = cfg.sim();
  AgileTrainOptions opt;
  opt.curriculum = cfg.agile.curriculum;
  opt.parallelism = cfg.harness.parallelism;
  if (cfg.agile.warm_start) {
    ImitationConfig ic;
    ic.episodes = cfg.agile.imitation_episodes;
    ic.epochs = cfg.agile.imitation_epochs;
    opt.init = imitate_scripted(sim, seed, ic);
  }
  return train_agile(cfg.cem, sim, seed, opt);
}

std::uint64_t dataset_base_seed(std::uint64_t seed) { return mix_seed(seed) ^ 0xdadaULL; }

RaDataset collect_ra_dataset(const AppConfig& cfg, const AgilePolicy& policy,
                             std::uint64_t seed) {
  return collect_dataset(policy, cfg.ra.dataset_episodes, cfg.sim(), dataset_base_seed(seed),
                         cfg.harness.parallelism, cfg.ra.dataset);
}

RATrainResult train_value_net(const AppConfig& cfg, const RaDataset& data, std::uint64_t seed) {
  RATrainConfig rc = cfg.ra;
  rc.seed = seed;
  return train_ra(data, rc);
}

StackBuild build_stack(const AppConfig& cfg, std::uint64_t seed) {
  StackBuild b;
  b.agile = train_agile_policy(cfg, seed);
  b.stack.seed = seed;
  b.stack.agile = AgilePolicy(b.agile.best);
  b.dataset = collect_ra_dataset(cfg, b.stack.agile, seed);
  b.value = train_value_net(cfg, b.dataset, seed);
  b.stack.value_net = b.value.net;
  return b;
}

BenchmarkConfig benchmark_config(const AppConfig& cfg) {
  BenchmarkConfig b;
  b.n_episodes = cfg.harness.episodes;
  b.base_seed = cfg.harness.base_seed;
  b.shield = cfg.harness.shield;
  b.parallelism = cfg.harness.parallelism;
  b.variant = cfg.harness.variant;
  b.config_hash = config_hash(cfg);
  return b;
}

}  // namespace absnav
