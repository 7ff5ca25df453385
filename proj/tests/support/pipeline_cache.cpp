#include "pipeline_cache.hpp"

#include <cstdio>

#include "absnav/checkpoint.hpp"

namespace absnav::testing {

namespace fs = std::filesystem;

namespace {

// Config with everything that cannot change a trained agile policy reset.
AppConfig agile_key(AppConfig c) {
  const HarnessConfig h;
  c.ra = RATrainConfig{};
  c.shield = ShieldConfig{};
  c.harness.episodes = h.episodes;
  c.harness.base_seed = h.base_seed;
  c.harness.seeds = h.seeds;
  c.harness.parallelism = h.parallelism;
  c.harness.shield = h.shield;
  return c;
}

AppConfig value_key(const AppConfig& c) {
  AppConfig k = agile_key(c);
  k.ra = c.ra;
  return k;
}

}  // namespace

PipelineCache::PipelineCache(AppConfig cfg, fs::path dir) : cfg_(std::move(cfg)) {
  if (!dir.empty()) {
    agile_dir_ = dir / ("agile-" + config_hash(agile_key(cfg_)));
    value_dir_ = dir / ("value-" + config_hash(value_key(cfg_)));
    fs::create_directories(agile_dir_);
    fs::create_directories(value_dir_);
  }
}

fs::path PipelineCache::agile_path(std::uint64_t seed) const {
  return agile_dir_.empty() ? fs::path{}
                            : agile_dir_ / ("agile_" + std::to_string(seed) + ".ckpt");
}

fs::path PipelineCache::value_path(std::uint64_t seed) const {
  return value_dir_.empty() ? fs::path{}
                            : value_dir_ / ("value_" + std::to_string(seed) + ".ckpt");
}

const AgilePolicy& PipelineCache::agile(std::uint64_t seed) {
  if (auto it = agile_.find(seed); it != agile_.end()) return it->second;
  const fs::path path = agile_path(seed);
  PolicyParams p;
  if (!path.empty() && fs::exists(path)) {
    p.net = load_checkpoint(path);
  } else {
    std::fprintf(stderr, "  training agile policy, seed %llu\n",
                 static_cast<unsigned long long>(seed));
    p = train_agile_policy(cfg_, seed).best;
    if (!path.empty()) save_checkpoint(p.net, path);
  }
  return agile_.emplace(seed, AgilePolicy(std::move(p))).first->second;
}

RaDataset PipelineCache::dataset(std::uint64_t seed) {
  return collect_ra_dataset(cfg_, agile(seed), seed);
}

const MlpParams& PipelineCache::value_net(std::uint64_t seed) {
  if (auto it = value_.find(seed); it != value_.end()) return it->second;
  const fs::path path = value_path(seed);
  MlpParams net;
  if (!path.empty() && fs::exists(path)) {
    net = load_checkpoint(path);
  } else {
    const RaDataset data = dataset(seed);
    std::fprintf(stderr, "  training value network, seed %llu (%zu steps)\n",
                 static_cast<unsigned long long>(seed), data.size());
    net = train_value_net(cfg_, data, seed).net;
    if (!path.empty()) save_checkpoint(net, path);
  }
  return value_.emplace(seed, std::move(net)).first->second;
}

PolicyStack PipelineCache::stack(std::uint64_t seed) {
  PolicyStack s;
  s.seed = seed;
  s.agile = agile(seed);
  s.value_net = value_net(seed);
  return s;
}

std::vector<PolicyStack> PipelineCache::stacks() {
  std::vector<PolicyStack> out;
  for (auto seed : cfg_.harness.seeds) out.push_back(stack(seed));
  return out;
}

AppConfig acceptance_config() { return AppConfig{}; }

}  // namespace absnav::testing
