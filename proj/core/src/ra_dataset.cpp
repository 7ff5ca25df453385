#include "absnav/ra_dataset.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "absnav/errors.hpp"
#include "absnav/parallel.hpp"

namespace absnav {
namespace {

constexpr char kMagic[8] = {'A', 'B', 'S', 'R', 'A', 'D', 'S', '\0'};
constexpr std::size_t kRecordBytes = 32 * 4 + 1 + 3 * 4;

RAObservation obs_from_floats(const float* f) {
  std::array<double, kRaObsDim> a{};
  for (int i = 0; i < kRaObsDim; ++i) a[i] = f[i];
  return RAObservation::from_array(a);
}

template <typename T>
void put(std::string& buf, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  buf.append(bytes, sizeof(T));
}

template <typename T>
T get(const char*& p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  p += sizeof(T);
  return v;
}

}  // namespace

LabeledStep RaDataset::at(std::size_t i, bool softened) const {
  LabeledStep s;
  s.obs = obs_from_floats(obs(i));
  if (!terminal(i)) s.obs_next = obs_from_floats(obs(i + 1));
  s.l_value = l_[i];
  s.zeta_value = zeta(i, softened);
  return s;
}

void RaDataset::append_episode(std::span<const RAObservation> obs, std::span<const double> l,
                               std::span<const double> zeta_raw) {
  if (obs.size() != l.size() || obs.size() != zeta_raw.size() || obs.empty()) {
    throw DimensionMismatch("episode labels must be non-empty and equally long");
  }
  const auto soft = soften_zeta(zeta_raw);
  for (std::size_t t = 0; t < obs.size(); ++t) {
    const auto a = obs[t].to_array();
    for (double v : a) obs_.push_back(static_cast<float>(v));
    l_.push_back(static_cast<float>(l[t]));
    zeta_raw_.push_back(static_cast<float>(zeta_raw[t]));
    zeta_soft_.push_back(static_cast<float>(soft[t]));
    terminal_.push_back(t + 1 == obs.size() ? 1 : 0);
  }
  ++num_episodes_;
  if (zeta_raw.back() > 0.0) ++num_collisions_;
}

void RaDataset::append(const RaDataset& o) {
  obs_.insert(obs_.end(), o.obs_.begin(), o.obs_.end());
  l_.insert(l_.end(), o.l_.begin(), o.l_.end());
  zeta_soft_.insert(zeta_soft_.end(), o.zeta_soft_.begin(), o.zeta_soft_.end());
  zeta_raw_.insert(zeta_raw_.end(), o.zeta_raw_.begin(), o.zeta_raw_.end());
  terminal_.insert(terminal_.end(), o.terminal_.begin(), o.terminal_.end());
  num_episodes_ += o.num_episodes_;
  num_collisions_ += o.num_collisions_;
}

void RaDataset::reserve(std::size_t steps) {
  obs_.reserve(steps * kRaObsDim);
  l_.reserve(steps);
  zeta_soft_.reserve(steps);
  zeta_raw_.reserve(steps);
  terminal_.reserve(steps);
}

LabeledTrace label_trace(const EpisodeTrace& trace, const RewardConfig& rewards) {
  LabeledTrace out;
  out.obs.reserve(trace.steps.size());
  out.l.reserve(trace.steps.size());
  out.zeta.reserve(trace.steps.size());
  for (const auto& rec : trace.steps) {
    out.obs.push_back(make_ra_observation(rec.state, trace.world.goal, rec.rays));
    out.l.push_back(l_margin(goal_distance(rec.state, trace.world.goal), rewards.sigma_tight));
    out.zeta.push_back(zeta_raw(rec.collided));
  }
  return out;
}

void validate(const DatasetOptions& options) {
  if (!(options.branch_fraction >= 0.0 && options.branch_fraction <= 1.0)) {
    throw ConfigError("branch_fraction must lie in [0, 1]");
  }
  if (!(options.hold_min >= 0.0 && options.hold_max >= options.hold_min)) {
    throw ConfigError("branch hold durations must satisfy 0 <= hold_min <= hold_max");
  }
  const auto& b = options.branch_box;
  if (!(b.lo.vx <= b.hi.vx && b.lo.vy <= b.hi.vy && b.lo.omega <= b.hi.omega)) {
    throw ConfigError("branch command box is empty");
  }
}

RaDataset collect_dataset(const AgilePolicy& policy, int n_episodes, const SimConfig& sim,
                          std::uint64_t base_seed, int parallelism, const DatasetOptions& options) {
  validate(options);
  SimConfig cfg = sim;
  cfg.episode.record_steps = true;
  RaDataset data;
  if (n_episodes <= 0) return data;

  // Bounded blocks keep peak memory near the size of the final dataset.
  constexpr int kBlock = 256;
  for (int block = 0; block < n_episodes; block += kBlock) {
    const int count = std::min(kBlock, n_episodes - block);
    std::vector<RaDataset> parts(static_cast<std::size_t>(count));
    parallel_for(parts.size(), parallelism, [&](std::size_t j) {
      const auto index = static_cast<std::uint64_t>(block) + j;
      const std::uint64_t world_seed = episode_seed(base_seed, index);
      const WorldConfig world = sample_world(WorldMode::kTest, world_seed);
      Rng rng = make_rng(mix_seed(world_seed));
      const EpisodeStart start = sample_episode_start(rng);
      auto trace = run_episode(world, policy, nullptr, cfg, start, rng());
      if (uniform(rng, 0.0, 1.0) < options.branch_fraction && trace.steps.size() > 1) {
        const auto& at = trace.steps[static_cast<std::size_t>(
            uniform_int(rng, 0, static_cast<int>(trace.steps.size()) - 2))];
        EpisodeStart branch;
        branch.state = at.state;
        branch.horizon = start.horizon;
        branch.start_time = at.time;
        const auto& box = options.branch_box;
        branch.state.vx = uniform(rng, box.lo.vx, box.hi.vx);
        branch.state.vy = uniform(rng, box.lo.vy, box.hi.vy);
        branch.state.omega = uniform(rng, box.lo.omega, box.hi.omega);
        branch.hold_command = {branch.state.vx, branch.state.vy, branch.state.omega};
        branch.hold_duration = uniform(rng, options.hold_min, options.hold_max);
        trace = run_episode(world, policy, nullptr, cfg, branch, rng());
      }
      const auto labels = label_trace(trace, cfg.rewards);
      parts[j].append_episode(labels.obs, labels.l, labels.zeta);
    });
    for (const auto& p : parts) data.append(p);
  }
  return data;
}

OracleResult rollout_oracle(const WorldConfig& world, const AgilePolicy& policy,
                            const EpisodeStart& start, double gamma, const SimConfig& sim) {
  SimConfig cfg = sim;
  cfg.episode.ray_noise = false;
  cfg.episode.illusion = false;
  cfg.episode.record_steps = true;
  OracleResult r;
  r.trace = run_episode(world, policy, nullptr, cfg, start, 0);
  r.labels = label_trace(r.trace, cfg.rewards);
  r.values = backward_recursion(r.labels.l, r.labels.zeta, gamma);
  return r;
}

void write_dataset(const RaDataset& data, std::ostream& out) {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  put<std::uint32_t>(buf, kDatasetVersion);
  put<std::uint64_t>(buf, data.size());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));

  std::string rec;
  rec.reserve(kRecordBytes);
  for (std::size_t i = 0; i < data.size(); ++i) {
    rec.clear();
    const float* o = data.obs(i);
    for (int k = 0; k < kRaObsDim; ++k) put<float>(rec, o[k]);
    const bool term = data.terminal(i);
    for (int k = 0; k < kRaObsDim; ++k) put<float>(rec, term ? 0.0f : data.obs(i + 1)[k]);
    put<std::uint8_t>(rec, term ? 1 : 0);
    put<float>(rec, static_cast<float>(data.l_value(i)));
    put<float>(rec, static_cast<float>(data.zeta(i, true)));
    put<float>(rec, static_cast<float>(data.zeta(i, false)));
    out.write(rec.data(), static_cast<std::streamsize>(rec.size()));
  }
}

RaDataset read_dataset(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CorruptDataset("missing ABSRADS header");
  }
  char head[12];
  if (!in.read(head, sizeof(head))) throw CorruptDataset("truncated dataset header");
  const char* p = head;
  const auto version = get<std::uint32_t>(p);
  if (version != kDatasetVersion) {
    throw FormatVersionMismatch("dataset version " + std::to_string(version) +
                                ", reader supports v" + std::to_string(kDatasetVersion));
  }
  const auto count = get<std::uint64_t>(p);

  RaDataset data;
  std::vector<RAObservation> obs;
  std::vector<double> l;
  std::vector<double> zeta;
  std::vector<float> pending_next;
  char rec[kRecordBytes];
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!in.read(rec, sizeof(rec))) throw CorruptDataset("truncated dataset records");
    const char* q = rec;
    float o[kRaObsDim];
    float next[kRaObsDim];
    for (float& v : o) v = get<float>(q);
    for (float& v : next) v = get<float>(q);
    const bool term = get<std::uint8_t>(q) != 0;
    const float lv = get<float>(q);
    get<float>(q);  // softened zeta is recomputed from the raw labels
    const float zr = get<float>(q);

    if (!pending_next.empty() && !std::equal(pending_next.begin(), pending_next.end(), o)) {
      throw CorruptDataset("record " + std::to_string(i) + " does not follow its predecessor");
    }
    std::array<double, kRaObsDim> a{};
    for (int k = 0; k < kRaObsDim; ++k) a[k] = o[k];
    obs.push_back(RAObservation::from_array(a));
    l.push_back(lv);
    zeta.push_back(zr);
    if (term) {
      data.append_episode(obs, l, zeta);
      obs.clear();
      l.clear();
      zeta.clear();
      pending_next.clear();
    } else {
      pending_next.assign(next, next + kRaObsDim);
    }
  }
  if (!obs.empty()) throw CorruptDataset("dataset ends inside an episode");
  return data;
}

void save_dataset(const RaDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_dataset(data, out);
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());
}

RaDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return read_dataset(in);
}

}  // namespace absnav
