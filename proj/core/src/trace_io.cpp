#include "absnav/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "absnav/errors.hpp"
#include "absnav/ra_value.hpp"

namespace absnav {
namespace {

using nlohmann::json;

// JSON has no NaN; absent values are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json state_json(const RobotState& s) { return {s.x, s.y, s.theta, s.vx, s.vy, s.omega}; }

RobotState state_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
          j.at(3).get<double>(), j.at(4).get<double>(), j.at(5).get<double>()};
}

Outcome outcome_from(const std::string& s) {
  if (s == "success") return Outcome::kSuccess;
  if (s == "collision") return Outcome::kCollision;
  if (s == "timeout") return Outcome::kTimeout;
  throw CorruptDataset("unknown outcome '" + s + "'");
}

}  // namespace

void write_trace(const EpisodeTrace& t, std::ostream& out) {
  json head = {{"type", "episode"},
               {"outcome", to_string(t.outcome)},
               {"peak_speed", t.peak_speed},
               {"mean_speed", t.mean_speed},
               {"total_return", t.total_return},
               {"horizon", t.horizon},
               {"num_steps", t.num_steps},
               {"recovery_steps", t.recovery_steps},
               {"seed", t.seed},
               {"world_seed", t.world.rng_seed},
               {"goal", {t.world.goal.x, t.world.goal.y, t.world.goal.heading}},
               {"final_state", state_json(t.final_state)},
               {"records", t.steps.size()}};
  json obstacles = json::array();
  for (const auto& o : t.world.obstacles) obstacles.push_back({o.cx, o.cy, o.radius});
  head["obstacles"] = std::move(obstacles);
  out << head.dump() << '\n';

  for (const auto& r : t.steps) {
    const auto& w = r.reward;
    json step = {{"type", "step"},
                 {"time", r.time},
                 {"state", state_json(r.state)},
                 {"mode", to_string(r.mode)},
                 {"command", {r.command.vx, r.command.vy, r.command.omega}},
                 {"v_hat", num(r.v_hat)},
                 {"reward",
                  {{"possoft", w.possoft},
                   {"postight", w.postight},
                   {"heading", w.heading},
                   {"agile", w.agile},
                   {"stall", w.stall},
                   {"penalty", w.penalty},
                   {"smooth", w.smooth}}},
                 {"rays", r.rays},
                 {"terminal", r.terminal},
                 {"collided", r.collided}};
    out << step.dump() << '\n';
  }
}

EpisodeTrace read_trace(std::istream& in) {
  EpisodeTrace t;
  std::string line;
  bool have_head = false;
  std::size_t expected = 0;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "episode") {
        t.outcome = outcome_from(j.at("outcome").get<std::string>());
        t.peak_speed = j.at("peak_speed").get<double>();
        t.mean_speed = j.at("mean_speed").get<double>();
        t.total_return = j.at("total_return").get<double>();
        t.horizon = j.at("horizon").get<double>();
        t.num_steps = j.at("num_steps").get<int>();
        t.recovery_steps = j.at("recovery_steps").get<int>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.world.rng_seed = j.at("world_seed").get<std::uint64_t>();
        const auto& g = j.at("goal");
        t.world.goal = {g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>()};
        for (const auto& o : j.at("obstacles")) {
          t.world.obstacles.push_back(
              {o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()});
        }
        t.final_state = state_from(j.at("final_state"));
        expected = j.at("records").get<std::size_t>();
        have_head = true;
      } else if (type == "step") {
        StepRecord r;
        r.time = j.at("time").get<double>();
        r.state = state_from(j.at("state"));
        r.mode = j.at("mode").get<std::string>() == "recovery" ? Mode::kRecovery : Mode::kAgile;
        const auto& c = j.at("command");
        r.command = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
        r.v_hat = num_from(j.at("v_hat"));
        const auto& w = j.at("reward");
        r.reward.possoft = w.at("possoft").get<double>();
        r.reward.postight = w.at("postight").get<double>();
        r.reward.heading = w.at("heading").get<double>();
        r.reward.agile = w.at("agile").get<double>();
        r.reward.stall = w.at("stall").get<double>();
        r.reward.penalty = w.at("penalty").get<double>();
        r.reward.smooth = w.at("smooth").get<double>();
        r.rays = j.at("rays").get<RayDistances>();
        r.terminal = j.at("terminal").get<bool>();
        r.collided = j.at("collided").get<bool>();
        t.steps.push_back(r);
      } else {
        throw CorruptDataset("unknown trace record type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw CorruptDataset(std::string("malformed trace: ") + e.what());
  }
  if (!have_head) throw CorruptDataset("trace has no episode header");
  if (t.steps.size() != expected) throw CorruptDataset("trace record count mismatch");
  return t;
}

void export_trace(const EpisodeTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_trace(trace, out);
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());
}

EpisodeTrace import_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path.string());
  return read_trace(in);
}

int GridSpec::nx() const {
  return static_cast<int>(std::floor((x_max - x_min) / resolution + 1e-9)) + 1;
}

int GridSpec::ny() const {
  return static_cast<int>(std::floor((y_max - y_min) / resolution + 1e-9)) + 1;
}

WorldConfig three_obstacle_world() {
  WorldConfig w;
  w.obstacles = {{2.0, 0.7, kObstacleRadius}, {3.5, -0.6, kObstacleRadius},
                 {5.0, 0.5, kObstacleRadius}};
  w.goal = {6.5, 0.0, 0.0};
  w.spawn_rect = kTestRect;
  return w;
}

std::vector<GridCell> value_grid(const MlpParams& value_net, const WorldConfig& world,
                                 const TwistCommand& twist, double heading, const GridSpec& spec) {
  if (value_net.input_dim() != kRaObsDim || value_net.output_dim() != 1) {
    throw ShapeMismatch("value network must map 16 inputs to 1 output");
  }
  if (!(spec.resolution > 0.0) || spec.x_max < spec.x_min || spec.y_max < spec.y_min) {
    throw ConfigError("invalid grid specification");
  }
  const int nx = spec.nx();
  const int ny = spec.ny();
  const auto n = static_cast<Eigen::Index>(spec.size());
  Eigen::MatrixXd inputs(kRaObsDim, n);
  std::vector<GridCell> cells(static_cast<std::size_t>(n));
  Eigen::Index col = 0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix, ++col) {
      RobotState s{spec.x_min + ix * spec.resolution, spec.y_min + iy * spec.resolution, heading,
                   twist.vx, twist.vy, twist.omega};
      const auto obs = make_ra_observation(s, world.goal, cast_rays(s, world.obstacles));
      const auto a = obs.to_array();
      for (int k = 0; k < kRaObsDim; ++k) inputs(k, col) = a[k];
      cells[static_cast<std::size_t>(col)] = {s.x, s.y, 0.0};
    }
  }
  const Eigen::MatrixXd out = forward_batch(value_net, inputs);
  for (Eigen::Index i = 0; i < n; ++i) cells[static_cast<std::size_t>(i)].value = out(0, i);
  return cells;
}

void write_grid(const std::vector<GridCell>& cells, std::ostream& out) {
  out << "x,y,value\n";
  char buf[96];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.9g\n", c.x, c.y, c.value);
    out << buf;
  }
}

void export_grid(const MlpParams& value_net, const WorldConfig& world, const TwistCommand& twist,
                 double heading, const GridSpec& spec, const std::filesystem::path& path) {
  const auto cells = value_grid(value_net, world, twist, heading, spec);
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_grid(cells, out);
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());
}

}  // namespace absnav
