// Acceptance suite: one PASS/FAIL line per criterion. Trained stacks come from
// the on-disk pipeline cache and are built on first use.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "absnav/parallel.hpp"
#include "absnav/pipeline.hpp"
#include "absnav/trace_io.hpp"
#include "oracles.hpp"
#include "pipeline_cache.hpp"

namespace {

using namespace absnav;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  std::string out(static_cast<std::size_t>(std::snprintf(nullptr, 0, fmt, args...)), '\0');
  std::snprintf(out.data(), out.size() + 1, fmt, args...);
  return out;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(rng, -2.0, 2.0);
  return x;
}

// 1. Parameter and input gradients against central differences.
Verdict gradients() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(101);
  double worst = 0.0;
  int nets = 0;
  for (const std::vector<int>& dims : {kRaLayerDims, kPolicyLayerDims}) {
    for (int trial = 0; trial < 100; ++trial, ++nets) {
      const auto p = init_mlp(dims, rng);
      const auto x = random_vec(static_cast<std::size_t>(dims.front()), rng);
      const auto w = random_vec(static_cast<std::size_t>(dims.back()), rng);
      auto dot = [&](const MlpParams& q, const std::vector<double>& z) {
        const auto y = forward(q, z);
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * y(static_cast<Eigen::Index>(i));
        return s;
      };
      const auto bp = backprop(p, x, w);
      const auto fd_p = oracle::fd_param_grad(p, [&](const MlpParams& q) { return dot(q, x); });
      const auto fd_x =
          oracle::fd_input_grad(x, [&](const std::vector<double>& z) { return dot(p, z); });
      worst = std::max(worst, oracle::relative_error(flatten(bp.param_grad), fd_p));
      worst = std::max(worst, oracle::relative_error(to_vec(bp.input_grad), fd_x));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && secs < 10.0,
          format("%d nets, max relative error %.2e, %.1f s", nets, worst, secs)};
}

// 2. Analytic ray casting against ray marching.
Verdict ray_casting() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto scene = oracle::random_scene(rng);
    const auto d = cast_rays(scene.robot, scene.obstacles, kDefaultMaxRange);
    for (int i = 0; i < kNumRays; ++i) {
      const double m = oracle::march_ray(scene.robot.x, scene.robot.y,
                                         scene.robot.theta + ray_bearing(i), scene.obstacles,
                                         kDefaultMaxRange);
      worst = std::max(worst, std::abs(d[i] - m));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-3 && secs < 30.0,
          format("10000 scenes, max deviation %.2e m, %.1f s", worst, secs)};
}

// 3. Hand recursions and sublevel containment.
Verdict oracle_exactness(const AgilePolicy& policy, const AppConfig& cfg) {
  const auto t0 = Clock::now();
  const double g = kGammaRa;
  bool hand = true;
  {
    const auto v = backward_recursion(std::vector<double>{0.5, 0.2, -0.1},
                                      std::vector<double>{-1, -1, -1}, g);
    const double v2 = -0.1;
    const double v1 = g * std::max(-1.0, std::min(0.2, v2)) + (1 - g) * std::max(0.2, -1.0);
    const double v0 = g * std::max(-1.0, std::min(0.5, v1)) + (1 - g) * std::max(0.5, -1.0);
    hand = hand && v.v_star == std::vector<double>{-0.1, -0.1, -0.1} &&
           v.v_gamma == std::vector<double>{v0, v1, v2};
  }
  {
    const auto v = backward_recursion(std::vector<double>{0.5, 0.4, 0.3},
                                      std::vector<double>{-1, -1, 1}, g);
    const double v2 = 1.0;
    const double v1 = g * std::max(-1.0, std::min(0.4, v2)) + (1 - g) * std::max(0.4, -1.0);
    const double v0 = g * std::max(-1.0, std::min(0.5, v1)) + (1 - g) * std::max(0.5, -1.0);
    hand = hand && v.v_star == std::vector<double>{0.4, 0.4, 1.0} &&
           v.v_gamma == std::vector<double>{v0, v1, v2};
  }

  constexpr std::size_t kRollouts = 10000;
  std::vector<long> violations(kRollouts), mismatches(kRollouts), states(kRollouts);
  parallel_for(kRollouts, cfg.harness.parallelism, [&](std::size_t i) {
    const std::uint64_t seed = mix_seed(0x3a3a ^ i);
    Rng rng = make_rng(seed);
    const auto start = sample_episode_start(rng);
    const auto r = rollout_oracle(sample_world(WorldMode::kTest, seed), policy, start, g, cfg.sim());
    const auto v = backward_recursion(r.labels.l, r.labels.zeta, g);
    if (v.v_star != r.values.v_star || v.v_gamma != r.values.v_gamma) ++mismatches[i];
    for (std::size_t k = 0; k < r.values.v_gamma.size(); ++k) {
      if (r.values.v_gamma[k] <= 0.0 && r.values.v_star[k] > 0.0) ++violations[i];
    }
    states[i] = static_cast<long>(r.values.v_gamma.size());
  });
  const long viol = std::accumulate(violations.begin(), violations.end(), 0L);
  const long mism = std::accumulate(mismatches.begin(), mismatches.end(), 0L);
  const long n = std::accumulate(states.begin(), states.end(), 0L);
  const double secs = seconds_since(t0);
  return {hand && viol == 0 && mism == 0 && secs < 120.0,
          format("hand examples %s, %zu rollouts / %ld states, %ld containment violations, "
                 "%ld recursion mismatches, %.1f s",
                 hand ? "exact" : "WRONG", kRollouts, n, viol, mism, secs)};
}

// 4. Fitted value vs oracle value, and the sign map on the fixed world.
Verdict value_fidelity(testing::PipelineCache& cache) {
  const auto t0 = Clock::now();
  const AppConfig& cfg = cache.config();
  std::string detail;
  bool pass = true;
  for (auto seed : cfg.harness.seeds) {
    const auto& policy = cache.agile(seed);
    const auto& net = cache.value_net(seed);

    constexpr std::size_t kWorlds = 300;
    std::vector<double> sq(kWorlds);
    std::vector<long> counts(kWorlds);
    parallel_for(kWorlds, cfg.harness.parallelism, [&](std::size_t i) {
      // Seeds disjoint from both the dataset and the benchmark worlds.
      const std::uint64_t ws = mix_seed(0x4e1d00 + i);
      Rng rng = make_rng(ws);
      const auto start = sample_episode_start(rng);
      const auto r =
          rollout_oracle(sample_world(WorldMode::kTest, ws), policy, start, kGammaRa, cfg.sim());
      for (std::size_t k = 0; k < r.labels.obs.size(); ++k) {
        const double e = forward_scalar(net, r.labels.obs[k].to_array()) - r.values.v_gamma[k];
        sq[i] += e * e;
      }
      counts[i] = static_cast<long>(r.labels.obs.size());
    });
    const double mse = std::accumulate(sq.begin(), sq.end(), 0.0) /
                       static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0L));

    const WorldConfig world = three_obstacle_world();
    GridSpec spec;
    spec.resolution = 0.2;
    std::vector<std::pair<double, double>> cells;
    for (int ix = 0; ix < spec.nx(); ++ix) {
      for (int iy = 0; iy < spec.ny(); ++iy) {
        const double x = spec.x_min + ix * spec.resolution;
        const double y = spec.y_min + iy * spec.resolution;
        bool free = true;
        for (const auto& o : world.obstacles)
          free = free && std::hypot(x - o.cx, y - o.cy) > o.radius + kRobotRadius;
        if (free) cells.emplace_back(x, y);
      }
    }
    std::vector<int> agree(cells.size());
    parallel_for(cells.size(), cfg.harness.parallelism, [&](std::size_t i) {
      EpisodeStart start;
      start.state.x = cells[i].first;
      start.state.y = cells[i].second;
      start.state.theta = std::atan2(world.goal.y - start.state.y, world.goal.x - start.state.x);
      start.state.vx = 1.0;
      const auto r = rollout_oracle(world, policy, start, kGammaRa, cfg.sim());
      const double v_hat = forward_scalar(net, r.labels.obs.front().to_array());
      agree[i] = (v_hat <= 0.0) == (r.values.v_gamma.front() <= 0.0);
    });
    const double frac = static_cast<double>(std::accumulate(agree.begin(), agree.end(), 0)) /
                        static_cast<double>(cells.size());
    pass = pass && mse <= 0.05 && frac >= 0.9;
    detail += format("seed %llu: MSE %.4f, sign agreement %.1f%% of %zu cells; ",
                     static_cast<unsigned long long>(seed), mse, 100.0 * frac, cells.size());
  }
  detail += format("%.1f s", seconds_since(t0));
  return {pass, detail};
}

BenchmarkConfig bench(const AppConfig& cfg, bool shield) {
  BenchmarkConfig b = benchmark_config(cfg);
  b.n_episodes = 1000;
  b.shield = shield;
  return b;
}

// 5. Shielded vs agile-only on shared worlds.
Verdict shield_efficacy(testing::PipelineCache& cache) {
  const AppConfig& cfg = cache.config();
  const auto stacks = cache.stacks();
  const auto t0 = Clock::now();
  const auto on = run_benchmark(stacks, cfg.sim(), bench(cfg, true));
  const auto off = run_benchmark(stacks, cfg.sim(), bench(cfg, false));
  const double coll_ratio = on.collision_pct.mean / off.collision_pct.mean;
  const double v_ratio = on.vbar_mean.mean / off.vbar_mean.mean;
  return {coll_ratio <= 0.5 && v_ratio >= 0.8,
          format("collisions %.1f%% vs %.1f%% (ratio %.2f), vbar %.2f vs %.2f m/s (ratio %.2f), "
                 "success %.1f%% vs %.1f%%, %.1f s",
                 on.collision_pct.mean, off.collision_pct.mean, coll_ratio, on.vbar_mean.mean,
                 off.vbar_mean.mean, v_ratio, on.success_pct.mean, off.success_pct.mean,
                 seconds_since(t0))};
}

double noise_band(double p1_pct, double p2_pct, int n) {
  const double p1 = p1_pct / 100.0;
  const double p2 = p2_pct / 100.0;
  return 100.0 * 1.96 * std::sqrt((p1 * (1 - p1) + p2 * (1 - p2)) / n);
}

// 6. Softened vs raw failure labels vs no shield.
Verdict zeta_ablation(testing::PipelineCache& cache) {
  const AppConfig& cfg = cache.config();
  const auto t0 = Clock::now();
  std::vector<RaDataset> datasets;
  std::vector<AblationInput> inputs;
  for (auto seed : cfg.harness.seeds) datasets.push_back(cache.dataset(seed));
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto seed = cfg.harness.seeds[i];
    AblationInput in;
    in.seed = seed;
    in.agile = cache.agile(seed);
    in.dataset = &datasets[i];
    in.softened_net = cache.value_net(seed);
    inputs.push_back(std::move(in));
  }
  const auto res = ablate_zeta(inputs, cfg.ra, cfg.sim(), bench(cfg, true));
  const double soft = res.rows[0].report.collision_pct.mean;
  const double raw = res.rows[1].report.collision_pct.mean;
  const double plain = res.rows[2].report.collision_pct.mean;
  const double band1 = noise_band(soft, raw, 1000);
  const double band2 = noise_band(raw, plain, 1000);
  return {raw - soft > band1 && plain - raw > band2,
          format("collisions softened %.1f%%, raw %.1f%%, agile-only %.1f%%; gaps %.1f (band %.1f) "
                 "and %.1f (band %.1f) points, %.1f s",
                 soft, raw, plain, raw - soft, band1, plain - raw, band2, seconds_since(t0))};
}

// 7. Sensitivity to the value threshold.
Verdict threshold_robustness(testing::PipelineCache& cache) {
  const AppConfig& cfg = cache.config();
  const auto stacks = cache.stacks();
  const auto t0 = Clock::now();
  const std::vector<double> ths{-0.001, -0.01, -0.05, -0.1};
  const auto rows = sweep_threshold(stacks, ths, cfg.sim(), bench(cfg, true));
  double lo = 100.0, hi = 0.0;
  std::string table;
  for (const auto& r : rows) {
    lo = std::min(lo, r.report.success_pct.mean);
    hi = std::max(hi, r.report.success_pct.mean);
    table += format("%g: %.1f/%.1f ", r.threshold, r.report.success_pct.mean,
                    r.report.collision_pct.mean);
  }
  const double c_loose = rows.front().report.collision_pct.mean;
  const double c_tight = rows.back().report.collision_pct.mean;
  return {hi - lo < 5.0 && c_tight <= c_loose + 2.0,
          format("success/collision %% by threshold %sspread %.1f points, %.1f s", table.c_str(),
                 hi - lo, seconds_since(t0))};
}

// 8. Twist optimizer against exhaustive grid search.
Verdict optimizer_optimality(testing::PipelineCache& cache) {
  const AppConfig& cfg = cache.config();
  const auto seed = cfg.harness.seeds.front();
  const auto& policy = cache.agile(seed);
  const auto& net = cache.value_net(seed);
  const auto t0 = Clock::now();

  std::vector<RAObservation> instances;
  SimConfig sim = cfg.sim();
  for (int ep = 0; instances.size() < 1000; ++ep) {
    const auto trace = run_episode(benchmark_world(0x0b5e, ep), policy, nullptr, sim,
                                   benchmark_episode_seed(0x0b5e, ep));
    const auto labels = label_trace(trace, sim.rewards);
    for (std::size_t k = 0; k < labels.obs.size() && instances.size() < 1000; k += 7)
      instances.push_back(labels.obs[k]);
  }
  // The optimizer as specified: the pipeline's full-stop fallback is not one
  // of its iterates.
  ShieldConfig opt = cfg.shield;
  opt.stop_when_infeasible = false;
  struct Outcome {
    double ratio = 0.0;
    bool near_goal = false;   // grid optimum below sigma_tight
    bool infeasible = false;  // no iterate met the constraint
    bool governed = false;    // V-hat at the current twist hands control to the optimizer
  };
  std::vector<Outcome> out(instances.size());
  parallel_for(instances.size(), cfg.harness.parallelism, [&](std::size_t i) {
    const auto r = optimize_twist(instances[i], net, opt);
    const double f = evaluate_twist(r.twist, instances[i], net, opt).objective;
    const double best = oracle::grid_search_twist(instances[i], net, opt).objective;
    out[i] = {f / best, best < cfg.rewards.sigma_tight, !r.feasible,
              forward_scalar(net, instances[i].to_array()) >= opt.v_threshold};
  });
  long within = 0, near = 0, infeasible = 0, governed = 0, governed_within = 0;
  double worst = 0.0;
  for (const auto& o : out) {
    const bool ok = o.ratio <= 1.1;
    within += ok;
    worst = std::max(worst, o.ratio);
    governed += o.governed;
    governed_within += o.governed && ok;
    if (!ok) {
      near += o.near_goal;
      infeasible += o.infeasible;
    }
  }

  MlpParams stub = make_mlp(kRaLayerDims);
  stub.biases.back()(0) = -1.0;
  bool exact = true;
  for (double gx : {5.0, -5.0}) {
    RAObservation obs;
    obs.goal_x = gx;
    obs.log_rays.fill(std::log(kDefaultMaxRange));
    exact = exact && optimize_twist(obs, stub, opt).twist == TwistCommand{std::copysign(1.5, gx), 0, 0};
  }
  const double secs = seconds_since(t0);
  return {within == static_cast<long>(out.size()) && exact && secs < 120.0,
          format("%ld/%zu within 10%% of the grid optimum (worst ratio %.3g); misses: %ld with "
                 "the optimum within %.1f m of the goal, %ld infeasible; %ld/%ld within 10%% "
                 "where the governor would run the optimizer; stub case %s, %.1f s",
                 within, out.size(), worst, near, cfg.rewards.sigma_tight, infeasible,
                 governed_within, governed, exact ? "exact" : "WRONG", secs)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// 9. CLI determinism across repeated and parallel runs.
Verdict determinism(testing::PipelineCache& cache, const std::string& cli) {
  const AppConfig& cfg = cache.config();
  if (cli.empty()) return {false, "no CLI binary given (--cli)"};
  (void)cache.stacks();
  const auto t0 = Clock::now();
  std::string stacks;
  for (auto seed : cfg.harness.seeds) stacks += " --agile " + cache.agile_path(seed).string();
  for (auto seed : cfg.harness.seeds) stacks += " --value " + cache.value_path(seed).string();
  const fs::path dir = fs::temp_directory_path() / "absnav_acceptance";
  fs::create_directories(dir);
  auto run = [&](const std::string& name, int workers) {
    const fs::path out = dir / name;
    const std::string cmd = "\"" + cli + "\" eval --seed 42" + stacks +
                            " --parallelism " + std::to_string(workers) + " --out " + out.string();
    if (std::system(cmd.c_str()) != 0) return std::string("<failed>");
    return slurp(out);
  };
  const auto a = run("first.csv", 1);
  const auto b = run("second.csv", 1);
  const auto c = run("parallel.csv", 8);
  const bool ok = a != "<failed>" && !a.empty() && a == b && a == c;
  return {ok, format("repeat %s, 8-way %s, %zu bytes, %.1f s", a == b ? "identical" : "DIFFERENT",
                     a == c ? "identical" : "DIFFERENT", a.size(), seconds_since(t0))};
}

// 10. Linearized displacement vs unicycle integration over the recovery box.
Verdict linearization() {
  const auto t0 = Clock::now();
  const CommandBox box = kRecoveryBox;
  double worst = 0.0;
  constexpr int kSteps = 20;
  for (int i = 0; i <= kSteps; ++i) {
    for (int j = 0; j <= kSteps; ++j) {
      for (int k = 0; k <= kSteps; ++k) {
        const TwistCommand tw{box.lo.vx + (box.hi.vx - box.lo.vx) * i / kSteps,
                              box.lo.vy + (box.hi.vy - box.lo.vy) * j / kSteps,
                              box.lo.omega + (box.hi.omega - box.lo.omega) * k / kSteps};
        const auto lin = linearized_displacement(tw, 0.05);
        const auto ref = oracle::integrate_unicycle(tw, 0.05);
        worst = std::max(worst, std::hypot(lin.dx - ref.dx, lin.dy - ref.dy));
      }
    }
  }
  return {worst <= 5e-3, format("%d commands, max error %.2e m, %.1f s",
                                (kSteps + 1) * (kSteps + 1) * (kSteps + 1), worst,
                                seconds_since(t0))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the agile navigation stack"};
  std::string cache_dir = ABSNAV_CACHE_DIR;
  std::string cli;
  std::string report_path;
  std::vector<int> only;
  bool strict = false;
  app.add_option("--cache-dir", cache_dir, "Checkpoint cache directory");
  app.add_option("--cli", cli, "Path to the absnav binary");
  app.add_option("--report", report_path, "Also write the verdict lines to this file");
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 10));
  app.add_flag("--strict", strict, "Exit nonzero when a criterion fails");
  CLI11_PARSE(app, argc, argv);

  testing::PipelineCache cache(testing::acceptance_config(), cache_dir);
  const std::set<int> selected(only.begin(), only.end());

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"gradient correctness", gradients},
      {"ray-cast oracle equivalence", ray_casting},
      {"Bellman/oracle exactness",
       [&] { return oracle_exactness(cache.agile(cache.config().harness.seeds.front()),
                                     cache.config()); }},
      {"fitted-value fidelity", [&] { return value_fidelity(cache); }},
      {"shield efficacy", [&] { return shield_efficacy(cache); }},
      {"zeta-softening ablation", [&] { return zeta_ablation(cache); }},
      {"threshold robustness", [&] { return threshold_robustness(cache); }},
      {"twist-optimizer optimality", [&] { return optimizer_optimality(cache); }},
      {"determinism", [&] { return determinism(cache, cli); }},
      {"linearization accuracy", linearization},
  };

  std::ofstream report;
  if (!report_path.empty()) report.open(report_path);
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    const std::string line = format("%s %2d %s: ", v.pass ? "PASS" : "FAIL", id,
                                    criteria[i].first) + v.detail;
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (report.is_open()) report << line << std::endl;
  }
  return strict && failed > 0 ? 1 : 0;
}
