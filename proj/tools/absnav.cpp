// absnav: train, evaluate and inspect the agile policy / reach-avoid shield stack.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "absnav/checkpoint.hpp"
#include "absnav/errors.hpp"
#include "absnav/pipeline.hpp"
#include "absnav/trace_io.hpp"

namespace {

using namespace absnav;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> episodes;
  bool no_shield = false;
  std::optional<std::string> variant;
  std::optional<int> parallelism;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Seed");
  cmd->add_option("--out", c.out, "Output path");
  cmd->add_option("--episodes", c.episodes, "Episode count")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-shield", c.no_shield, "Disable the reach-avoid shield");
  cmd->add_option("--variant", c.variant, "aggressive | nominal | conservative")
      ->check(CLI::IsMember({"aggressive", "nominal", "conservative"}));
  cmd->add_option("--parallelism", c.parallelism, "Worker threads")->check(CLI::PositiveNumber);
}

AppConfig resolve(const Common& c) {
  AppConfig cfg = c.config_path.empty() ? AppConfig{} : load_config(c.config_path);
  if (c.variant) cfg.harness.variant = parse_variant(*c.variant);
  if (c.parallelism) cfg.harness.parallelism = *c.parallelism;
  if (c.no_shield) cfg.harness.shield = false;
  validate(cfg);
  return cfg;
}

std::uint64_t policy_seed(const Common& c) { return c.seed.value_or(0); }

void require_out(const Common& c, const char* what) {
  if (c.out.empty()) throw ConfigError(std::string("--out is required for ") + what);
}

/// Runs `write` against --out, or stdout when it is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open " + path);
  write(f);
  if (!f) throw IoFailure("write failed: " + path);
}

AgilePolicy load_agile(const std::string& path) {
  if (path.empty() || path == "scripted") return AgilePolicy::scripted();
  PolicyParams p;
  p.net = load_checkpoint(path);
  return AgilePolicy(std::move(p));
}

/// Pairs --agile and --value checkpoints by position; a missing value file
/// leaves that stack unshielded.
std::vector<PolicyStack> load_stacks(const std::vector<std::string>& agile,
                                     const std::vector<std::string>& value) {
  const std::size_t n = std::max<std::size_t>({agile.size(), value.size(), 1});
  if (agile.size() > 1 && agile.size() != n) throw ConfigError("--agile and --value counts differ");
  if (value.size() > 1 && value.size() != n) throw ConfigError("--agile and --value counts differ");
  std::vector<PolicyStack> stacks;
  for (std::size_t i = 0; i < n; ++i) {
    PolicyStack s;
    s.seed = i;
    s.agile = load_agile(agile.empty() ? "" : agile[agile.size() == 1 ? 0 : i]);
    if (!value.empty()) s.value_net = load_checkpoint(value[value.size() == 1 ? 0 : i]);
    stacks.push_back(std::move(s));
  }
  return stacks;
}

BenchmarkConfig bench_config(const AppConfig& cfg, const Common& c) {
  BenchmarkConfig b = benchmark_config(cfg);
  if (c.seed) b.base_seed = *c.seed;
  if (c.episodes) b.n_episodes = *c.episodes;
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agile navigation with a learned reach-avoid shield"};
  app.require_subcommand(1);

  Common c;
  std::vector<std::string> agile_paths, value_paths, data_paths;
  std::string history_path, loss_path, trace_path, data_path;
  int trace_episode = 0;
  bool raw_zeta = false;
  std::vector<double> thresholds{-0.001, -0.01, -0.05, -0.1};
  std::vector<double> twist{1.0, 0.0, 0.0};
  double heading = 0.0;
  double resolution = 0.1;
  std::optional<std::uint64_t> world_seed;

  auto* train_agile_cmd = app.add_subcommand("train-agile", "Train an agile policy");
  add_common(train_agile_cmd, c);
  train_agile_cmd->add_option("--history", history_path, "Search history CSV");

  auto* collect_cmd = app.add_subcommand("collect-ra", "Collect a reach-avoid dataset");
  add_common(collect_cmd, c);
  collect_cmd->add_option("--agile", agile_paths, "Policy checkpoint (default: scripted)")
      ->expected(0, 1);

  auto* train_ra_cmd = app.add_subcommand("train-ra", "Fit a reach-avoid value network");
  add_common(train_ra_cmd, c);
  train_ra_cmd->add_option("--data", data_path, "Dataset file")->required();
  train_ra_cmd->add_flag("--raw-zeta", raw_zeta, "Train on unsoftened failure labels");
  train_ra_cmd->add_option("--loss", loss_path, "Loss history CSV");

  auto* eval_cmd = app.add_subcommand("eval", "Benchmark policy stacks on test worlds");
  add_common(eval_cmd, c);
  eval_cmd->add_option("--agile", agile_paths, "Policy checkpoints, one per stack");
  eval_cmd->add_option("--value", value_paths, "Value checkpoints, one per stack");
  eval_cmd->add_option("--trace", trace_path, "Export one episode trace (JSONL)");
  eval_cmd->add_option("--trace-episode", trace_episode, "Episode index for --trace")
      ->check(CLI::NonNegativeNumber);

  auto* sweep_cmd = app.add_subcommand("sweep-threshold", "Shielded benchmark per threshold");
  add_common(sweep_cmd, c);
  sweep_cmd->add_option("--agile", agile_paths, "Policy checkpoints, one per stack");
  sweep_cmd->add_option("--value", value_paths, "Value checkpoints, one per stack")->required();
  sweep_cmd->add_option("--thresholds", thresholds, "Negative thresholds");

  auto* ablate_cmd = app.add_subcommand("ablate-zeta", "Softened vs raw failure labels");
  add_common(ablate_cmd, c);
  ablate_cmd->add_option("--agile", agile_paths, "Policy checkpoints, one per stack");
  ablate_cmd->add_option("--data", data_paths, "Datasets, one per stack")->required();

  auto* grid_cmd = app.add_subcommand("export-grid", "Value landscape over positions (CSV)");
  add_common(grid_cmd, c);
  grid_cmd->add_option("--value", value_paths, "Value checkpoint")->required()->expected(1);
  grid_cmd->add_option("--twist", twist, "vx vy omega")->expected(3);
  grid_cmd->add_option("--heading", heading, "Robot heading (rad)");
  grid_cmd->add_option("--resolution", resolution, "Lattice spacing (m)")
      ->check(CLI::PositiveNumber);
  grid_cmd->add_option("--world-seed", world_seed, "Sampled test world instead of the fixed one");

  auto* dump_cmd = app.add_subcommand("dump-config", "Print the resolved config as JSON");
  add_common(dump_cmd, c);

  CLI11_PARSE(app, argc, argv);

  try {
    const AppConfig cfg = resolve(c);

    if (*train_agile_cmd) {
      require_out(c, "train-agile");
      const auto res = train_agile_policy(cfg, policy_seed(c));
      save_checkpoint(res.best.net, c.out);
      if (!history_path.empty())
        emit(history_path, [&](std::ostream& o) { write_history_csv(res.history, o); });
      std::fprintf(stderr, "validation return %.3f, search return %.3f\n", res.best_return,
                   res.search_return);
    } else if (*collect_cmd) {
      require_out(c, "collect-ra");
      AppConfig local = cfg;
      if (c.episodes) local.ra.dataset_episodes = *c.episodes;
      const auto policy = load_agile(agile_paths.empty() ? "" : agile_paths.front());
      const auto data = collect_ra_dataset(local, policy, policy_seed(c));
      save_dataset(data, c.out);
      std::fprintf(stderr, "%zu steps, %zu episodes, %zu with a collision\n", data.size(),
                   data.num_episodes(), data.num_collision_episodes());
    } else if (*train_ra_cmd) {
      require_out(c, "train-ra");
      AppConfig local = cfg;
      local.ra.softened_zeta = !raw_zeta;
      const auto data = load_dataset(data_path);
      const auto res = train_value_net(local, data, policy_seed(c));
      save_checkpoint(res.net, c.out);
      if (!loss_path.empty()) {
        emit(loss_path, [&](std::ostream& o) {
          o << "epoch,loss\n";
          for (std::size_t i = 0; i < res.loss_history.size(); ++i)
            o << i << ',' << res.loss_history[i] << '\n';
        });
      }
      std::fprintf(stderr, "loss %.5f -> %.5f\n", res.loss_history.front(),
                   res.loss_history.back());
    } else if (*eval_cmd) {
      const auto stacks = load_stacks(agile_paths, value_paths);
      const auto bc = bench_config(cfg, c);
      const auto report = run_benchmark(stacks, cfg.sim(), bc);
      emit(c.out, [&](std::ostream& o) { write_metrics_csv(report, o); });
      if (!trace_path.empty()) {
        if (trace_episode >= bc.n_episodes) throw ConfigError("--trace-episode out of range");
        const auto& s = stacks.front();
        const MlpParams* v = bc.shield && s.value_net ? &*s.value_net : nullptr;
        const auto trace =
            run_episode(benchmark_world(bc.base_seed, trace_episode), s.agile, v, cfg.sim(),
                        benchmark_episode_seed(bc.base_seed, trace_episode));
        export_trace(trace, trace_path);
      }
    } else if (*sweep_cmd) {
      const auto stacks = load_stacks(agile_paths, value_paths);
      const auto rows = sweep_threshold(stacks, thresholds, cfg.sim(), bench_config(cfg, c));
      emit(c.out, [&](std::ostream& o) { write_table_csv(rows, o); });
    } else if (*ablate_cmd) {
      if (agile_paths.size() > 1 && agile_paths.size() != data_paths.size())
        throw ConfigError("--agile and --data counts differ");
      std::vector<RaDataset> datasets;
      for (const auto& p : data_paths) datasets.push_back(load_dataset(p));
      std::vector<AblationInput> inputs;
      for (std::size_t i = 0; i < datasets.size(); ++i) {
        AblationInput in;
        in.seed = policy_seed(c) + i;
        in.agile = load_agile(agile_paths.empty() ? ""
                                                  : agile_paths[agile_paths.size() == 1 ? 0 : i]);
        in.dataset = &datasets[i];
        inputs.push_back(std::move(in));
      }
      BenchmarkConfig bc = benchmark_config(cfg);
      if (c.episodes) bc.n_episodes = *c.episodes;
      const auto res = ablate_zeta(inputs, cfg.ra, cfg.sim(), bc);
      emit(c.out, [&](std::ostream& o) { write_table_csv(res.rows, o); });
    } else if (*grid_cmd) {
      const auto net = load_checkpoint(value_paths.front());
      const WorldConfig world =
          world_seed ? sample_world(WorldMode::kTest, *world_seed) : three_obstacle_world();
      GridSpec spec;
      spec.resolution = resolution;
      const auto cells =
          value_grid(net, world, TwistCommand{twist[0], twist[1], twist[2]}, heading, spec);
      emit(c.out, [&](std::ostream& o) { write_grid(cells, o); });
    } else if (*dump_cmd) {
      emit(c.out, [&](std::ostream& o) { o << dump_config(cfg) << '\n'; });
    }
  } catch (const absnav::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
