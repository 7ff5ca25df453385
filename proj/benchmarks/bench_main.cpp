#include <benchmark/benchmark.h>

#include <cmath>

#include "absnav/episode.hpp"
#include "absnav/mlp.hpp"
#include "absnav/ra_value.hpp"
#include "absnav/random.hpp"
#include "absnav/shield.hpp"

namespace {

using namespace absnav;

void BM_CastRays(benchmark::State& state) {
  const auto world = sample_world(WorldMode::kTest, 1);
  RobotState s;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cast_rays(s, world.obstacles));
    s.theta += 0.01;
  }
}
BENCHMARK(BM_CastRays);

void BM_ValueForward(benchmark::State& state) {
  Rng rng = make_rng(1);
  const auto net = init_mlp(kRaLayerDims, rng);
  std::vector<double> x(kRaObsDim, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(forward_scalar(net, x));
}
BENCHMARK(BM_ValueForward);

void BM_ValueBackprop(benchmark::State& state) {
  Rng rng = make_rng(2);
  const auto net = init_mlp(kRaLayerDims, rng);
  std::vector<double> x(kRaObsDim, 0.3);
  const std::vector<double> g{1.0};
  for (auto _ : state) benchmark::DoNotOptimize(backprop(net, x, g));
}
BENCHMARK(BM_ValueBackprop);

void BM_ValueBatchLoss(benchmark::State& state) {
  Rng rng = make_rng(3);
  const auto net = init_mlp(kRaLayerDims, rng);
  const auto n = state.range(0);
  const Eigen::MatrixXd in = Eigen::MatrixXd::Random(kRaObsDim, n);
  const Eigen::VectorXd tg = Eigen::VectorXd::Random(n);
  MlpParams grads = net;
  for (auto _ : state) benchmark::DoNotOptimize(mse_loss_and_grad(net, in, tg, grads));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ValueBatchLoss)->Arg(512)->Arg(4096);

void BM_OptimizeTwist(benchmark::State& state) {
  Rng rng = make_rng(4);
  const auto net = init_mlp(kRaLayerDims, rng);
  RAObservation obs;
  obs.vx = 1.0;
  obs.goal_x = 4.0;
  obs.goal_y = 1.0;
  obs.log_rays.fill(std::log(2.0));
  const ShieldConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_twist(obs, net, cfg));
}
BENCHMARK(BM_OptimizeTwist);

void BM_RunEpisode(benchmark::State& state) {
  Rng rng = make_rng(5);
  const auto net = init_mlp(kRaLayerDims, rng);
  const bool shielded = state.range(0) != 0;
  SimConfig sim;
  sim.episode.record_steps = false;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto world = sample_world(WorldMode::kTest, seed);
    benchmark::DoNotOptimize(
        run_episode(world, AgilePolicy::scripted(), shielded ? &net : nullptr, sim, seed++));
  }
}
BENCHMARK(BM_RunEpisode)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
