#include "absnav/agile_training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absnav/parallel.hpp"

namespace absnav {
namespace {

WorldConfig level_world(int level, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  WorldConfig w;
  w.rng_seed = seed;
  w.goal = sample_goal(rng);
  w.spawn_rect = kTrainRect;
  w.obstacles = sample_obstacles(level, kTrainRect, w.goal, rng);
  return w;
}

}  // namespace

double evaluate_return(const AgilePolicy& policy, const WorldConfig& world, const SimConfig& cfg,
                       std::uint64_t seed) {
  SimConfig c = cfg;
  c.episode.record_steps = false;
  return run_episode(world, policy, nullptr, c, seed).total_return;
}

int next_level(int level, double final_goal_distance, const RewardConfig& rewards, int max_level,
               Rng& rng) {
  if (final_goal_distance < rewards.sigma_tight) {
    if (level >= max_level) return uniform_int(rng, 0, max_level);
    return level + 1;
  }
  if (final_goal_distance > rewards.sigma_soft) return std::max(0, level - 1);
  return level;
}

SimConfig training_sim_config(SimConfig base) {
  base.episode.ray_noise = true;
  base.episode.illusion = true;
  base.episode.record_steps = false;
  return base;
}

AgileTrainResult train_agile(const CemConfig& cem, const SimConfig& sim, std::uint64_t seed,
                             const AgileTrainOptions& options) {
  validate(cem);
  Rng rng = make_rng(seed);
  PolicyParams shape = options.init ? *options.init : make_policy(rng);
  const SimConfig train_cfg = training_sim_config(sim);
  const auto slots = static_cast<std::size_t>(cem.episodes_per_eval);

  std::vector<int> levels(slots, options.levels.max_level);
  if (options.curriculum) {
    for (auto& l : levels) l = uniform_int(rng, 0, options.levels.initial_max_level);
  }
  Rng world_rng = make_rng(rng());

  std::vector<WorldConfig> worlds(slots);
  std::vector<std::uint64_t> episode_seeds(slots);
  std::vector<std::vector<double>> final_distance;
  std::vector<std::pair<double, std::vector<double>>> archive;

  auto objective = [&](const std::vector<std::vector<double>>& candidates, int) {
    // Shared worlds and episode seeds for the whole population.
    for (std::size_t j = 0; j < slots; ++j) {
      const std::uint64_t world_seed = world_rng();
      if (options.curriculum) {
        worlds[j] = level_world(levels[j], world_seed);
      } else {
        worlds[j] = sample_world(WorldMode::kTrain, world_seed);
      }
      episode_seeds[j] = world_rng();
    }
    const std::size_t n = candidates.size();
    std::vector<double> scores(n, 0.0);
    final_distance.assign(n, std::vector<double>(slots, 0.0));
    parallel_for(n, options.parallelism, [&](std::size_t c) {
      PolicyParams p = shape;
      unflatten(candidates[c], p.net);
      const AgilePolicy policy(std::move(p));
      double total = 0.0;
      for (std::size_t j = 0; j < slots; ++j) {
        const auto trace = run_episode(worlds[j], policy, nullptr, train_cfg, episode_seeds[j]);
        total += trace.total_return;
        final_distance[c][j] = goal_distance(trace.final_state, worlds[j].goal);
      }
      scores[c] = total / static_cast<double>(slots);
    });
    const auto best = static_cast<std::size_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
    archive.emplace_back(scores[best], candidates[best]);
    if (options.curriculum) {
      for (std::size_t j = 0; j < slots; ++j) {
        levels[j] = next_level(levels[j], final_distance[best][j], sim.rewards,
                               options.levels.max_level, rng);
      }
    }
    return scores;
  };

  CemResult res = cem_maximize(objective, flatten(shape.net), cem, rng);
  AgileTrainResult out;
  out.best = shape;
  out.search_return = res.best_score;
  out.best_return = res.best_score;
  out.history = std::move(res.history);
  if (options.validation_candidates <= 0 || options.validation_episodes <= 0) {
    unflatten(res.best, out.best.net);
    return out;
  }

  std::stable_sort(archive.begin(), archive.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto keep = std::min(archive.size(), static_cast<std::size_t>(options.validation_candidates));
  std::vector<std::vector<double>> pool;
  pool.push_back(res.mean);
  for (std::size_t i = 0; i < keep; ++i) pool.push_back(archive[i].second);

  const auto n_val = static_cast<std::size_t>(options.validation_episodes);
  std::vector<WorldConfig> val_worlds(n_val);
  std::vector<std::uint64_t> val_seeds(n_val);
  for (std::size_t j = 0; j < n_val; ++j) {
    const std::uint64_t ws = world_rng();
    val_worlds[j] = level_world(options.levels.max_level, ws);
    val_seeds[j] = world_rng();
  }
  std::vector<double> val(pool.size(), 0.0);
  parallel_for(pool.size(), options.parallelism, [&](std::size_t c) {
    PolicyParams p = shape;
    unflatten(pool[c], p.net);
    const AgilePolicy policy(std::move(p));
    double total = 0.0;
    for (std::size_t j = 0; j < n_val; ++j) {
      total += run_episode(val_worlds[j], policy, nullptr, train_cfg, val_seeds[j]).total_return;
    }
    val[c] = total / static_cast<double>(n_val);
  });
  const auto pick =
      static_cast<std::size_t>(std::max_element(val.begin(), val.end()) - val.begin());
  unflatten(pool[pick], out.best.net);
  out.best_return = val[pick];
  return out;
}

PolicyParams imitate_scripted(const SimConfig& sim, std::uint64_t seed,
                              const ImitationConfig& cfg) {
  Rng rng = make_rng(seed);
  SimConfig c = training_sim_config(sim);
  c.episode.record_steps = true;

  std::vector<std::array<double, kAgileObsDim>> inputs;
  std::vector<std::array<double, 3>> targets;
  const AgilePolicy scripted = AgilePolicy::scripted();
  for (int e = 0; e < cfg.episodes; ++e) {
    const WorldConfig world = sample_world(WorldMode::kTrain, rng());
    const auto trace = run_episode(world, scripted, nullptr, c, rng());
    for (const auto& rec : trace.steps) {
      if (rec.terminal) continue;
      const auto obs = make_agile_observation(rec.state, world.goal, rec.rays, trace.horizon - rec.time);
      inputs.push_back(normalize_observation(obs));
      targets.push_back(unsquash_command(scripted_policy(obs), kAgileBox, 0.02));
    }
  }

  PolicyParams policy = make_policy(rng);
  AdamState adam = make_adam(policy.net, {cfg.learning_rate});
  MlpParams grads = make_mlp(policy.net.layer_dims);
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  Eigen::MatrixXd x(kAgileObsDim, static_cast<Eigen::Index>(batch));
  Eigen::MatrixXd y(3, static_cast<Eigen::Index>(batch));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start + batch <= order.size(); start += batch) {
      for (std::size_t b = 0; b < batch; ++b) {
        const auto idx = order[start + b];
        for (int i = 0; i < kAgileObsDim; ++i) x(i, static_cast<Eigen::Index>(b)) = inputs[idx][i];
        for (int i = 0; i < 3; ++i) y(i, static_cast<Eigen::Index>(b)) = targets[idx][i];
      }
      mse_loss_and_grad(policy.net, x, y, grads);
      adam_step(policy.net, grads, adam);
    }
  }
  return policy;
}

}  // namespace absnav
