#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "absnav/episode.hpp"
#include "absnav/ra_value.hpp"

namespace absnav {

/// One labelled transition. A missing obs_next marks a terminal step, whose
/// successor value is taken as +inf.
struct LabeledStep {
  RAObservation obs;
  std::optional<RAObservation> obs_next;
  double l_value = 0.0;
  double zeta_value = -1.0;
};

/// Transitions stored episode by episode. The successor of a non-terminal step
/// is the next stored step, so observations are held once. Both softened and
/// raw failure labels are kept so either can be trained on the same data.
class RaDataset {
 public:
  [[nodiscard]] std::size_t size() const { return l_.size(); }
  [[nodiscard]] bool empty() const { return l_.empty(); }
  [[nodiscard]] std::size_t num_episodes() const { return num_episodes_; }
  [[nodiscard]] std::size_t num_collision_episodes() const { return num_collisions_; }

  [[nodiscard]] const float* obs(std::size_t i) const { return &obs_[i * kRaObsDim]; }
  [[nodiscard]] bool terminal(std::size_t i) const { return terminal_[i] != 0; }
  [[nodiscard]] double l_value(std::size_t i) const { return l_[i]; }
  [[nodiscard]] double zeta(std::size_t i, bool softened) const {
    return softened ? zeta_soft_[i] : zeta_raw_[i];
  }

  [[nodiscard]] LabeledStep at(std::size_t i, bool softened = true) const;

  /// Appends one episode; the last step must be the terminal one.
  void append_episode(std::span<const RAObservation> obs, std::span<const double> l,
                      std::span<const double> zeta_raw);
  void append(const RaDataset& other);
  void reserve(std::size_t steps);

 private:
  std::vector<float> obs_;
  std::vector<float> l_;
  std::vector<float> zeta_soft_;
  std::vector<float> zeta_raw_;
  std::vector<std::uint8_t> terminal_;
  std::size_t num_episodes_ = 0;
  std::size_t num_collisions_ = 0;
};

/// Reach-avoid labels of one recorded trace: observations from ground-truth
/// rays, l from the goal distance and raw zeta from the collision flag.
struct LabeledTrace {
  std::vector<RAObservation> obs;
  std::vector<double> l;
  std::vector<double> zeta;
};
[[nodiscard]] LabeledTrace label_trace(const EpisodeTrace& trace, const RewardConfig& rewards);

/// A branch episode replays a nominal episode up to a uniformly drawn step,
/// sets the robot twist to a command drawn uniformly from branch_box, holds
/// that command for U(hold_min, hold_max) seconds and then hands control back
/// to the agile policy until the original horizon. Only the branch is
/// recorded. Branches cover the states the shield creates and queries, and
/// fast approaches the agile policy itself avoids.
inline constexpr CommandBox kBranchBox{{-1.5, -0.3, -3.0}, {3.5, 0.3, 3.0}};

struct DatasetOptions {
  double branch_fraction = 0.5;
  CommandBox branch_box = kBranchBox;
  double hold_min = 0.1;  // s
  double hold_max = 0.5;  // s
};

void validate(const DatasetOptions& options);

/// Rolls out the agile policy on test-density worlds (8 obstacles) and labels
/// every visited state. Episode i uses world seed base_seed ^ i.
[[nodiscard]] RaDataset collect_dataset(const AgilePolicy& policy, int n_episodes,
                                        const SimConfig& sim, std::uint64_t base_seed,
                                        int parallelism = 1, const DatasetOptions& options = {});

struct OracleResult {
  EpisodeTrace trace;
  LabeledTrace labels;
  RaValues values;
};

/// Deterministic rollout (no observation noise, no shield) followed by the
/// exact backward recursions with raw failure labels.
[[nodiscard]] OracleResult rollout_oracle(const WorldConfig& world, const AgilePolicy& policy,
                                          const EpisodeStart& start, double gamma,
                                          const SimConfig& sim);

/// Binary dataset file, little-endian:
///   magic "ABSRADS\0", u32 version (1), u64 record count, then per record
///   16 x f32 obs, 16 x f32 next obs (zeros when terminal), u8 terminal,
///   f32 l, f32 zeta (softened), f32 zeta (raw).
inline constexpr std::uint32_t kDatasetVersion = 1;

void write_dataset(const RaDataset& data, std::ostream& out);
[[nodiscard]] RaDataset read_dataset(std::istream& in);
void save_dataset(const RaDataset& data, const std::filesystem::path& path);
[[nodiscard]] RaDataset load_dataset(const std::filesystem::path& path);

}  // namespace absnav
