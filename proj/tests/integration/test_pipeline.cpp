#include <gtest/gtest.h>

#include "absnav/trace_io.hpp"
#include "pipeline_cache.hpp"

namespace absnav {
namespace {

testing::PipelineCache& cache() {
  static testing::PipelineCache c(testing::acceptance_config(), ABSNAV_CACHE_DIR);
  return c;
}

TEST(Pipeline, TrainedPolicyBeatsScripted) {
  const auto& cfg = cache().config();
  const auto& trained = cache().agile(cfg.harness.seeds.front());
  const SimConfig sim = cfg.sim();
  double t = 0.0, s = 0.0;
  constexpr int kWorlds = 500;
  for (int i = 0; i < kWorlds; ++i) {
    const auto world = benchmark_world(0x1e57, i);
    const auto seed = benchmark_episode_seed(0x1e57, i);
    t += evaluate_return(trained, world, sim, seed);
    s += evaluate_return(AgilePolicy::scripted(), world, sim, seed);
  }
  EXPECT_GT(t / kWorlds, s / kWorlds);
}

// Faster approach speeds make the states just in front of an obstacle riskier.
TEST(Pipeline, ValueRisesWithApproachSpeed) {
  const auto& net = cache().value_net(cache().config().harness.seeds.front());
  const auto world = three_obstacle_world();
  GridSpec spec;
  spec.resolution = 0.05;
  auto strip_mean = [&](double vx) {
    const auto cells = value_grid(net, world, TwistCommand{vx, 0, 0}, 0.0, spec);
    double sum = 0.0;
    int n = 0;
    for (const auto& c : cells) {
      for (const auto& o : world.obstacles) {
        const double front = o.cx - o.radius - kRobotRadius;
        if (c.x >= front - 1.0 && c.x < front && std::abs(c.y - o.cy) <= o.radius) {
          sum += c.value;
          ++n;
        }
      }
    }
    return sum / n;
  };
  EXPECT_GT(strip_mean(3.0), strip_mean(1.0));
}

}  // namespace
}  // namespace absnav
