#include "absnav/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "absnav/errors.hpp"

namespace absnav {
namespace {

using nlohmann::json;

// Binds JSON keys of one section to fields, in both directions.
class Section {
 public:
  template <typename T>
  void field(const std::string& key, T& value) {
    readers_[key] = [&value, key](const json& j) {
      try {
        value = j.get<T>();
      } catch (const json::exception&) {
        throw ConfigError("wrong type for key '" + key + "'");
      }
    };
    writers_.emplace_back(key, [&value] { return json(value); });
  }

  void read(const std::string& name, const json& j) const {
    if (!j.is_object()) throw ConfigError("section '" + name + "' must be an object");
    for (const auto& [key, val] : j.items()) {
      const auto it = readers_.find(key);
      if (it == readers_.end()) throw ConfigError("unknown key '" + name + "." + key + "'");
      it->second(val);
    }
  }

  [[nodiscard]] json write() const {
    json out = json::object();
    for (const auto& [key, fn] : writers_) out[key] = fn();
    return out;
  }

 private:
  std::map<std::string, std::function<void(const json&)>> readers_;
  std::vector<std::pair<std::string, std::function<json()>>> writers_;
};

struct Binding {
  std::map<std::string, Section> sections;
  std::string variant;
  std::vector<double> box_lo;
  std::vector<double> box_hi;
};

void bind(AppConfig& c, Binding& b) {
  auto& dyn = b.sections["dynamics"];
  dyn.field("dt", c.dynamics.dt);
  dyn.field("tau_tw", c.dynamics.tau_tw);
  dyn.field("a_max", c.dynamics.a_max);
  dyn.field("alpha_max", c.dynamics.alpha_max);

  auto& rw = b.sections["rewards"];
  rw.field("sigma_soft", c.rewards.sigma_soft);
  rw.field("sigma_tight", c.rewards.sigma_tight);
  rw.field("sigma_heading", c.rewards.sigma_heading);
  rw.field("t_r_pos_soft", c.rewards.t_r_pos_soft);
  rw.field("t_r_pos_tight", c.rewards.t_r_pos_tight);
  rw.field("t_r_heading", c.rewards.t_r_heading);
  rw.field("v_max", c.rewards.v_max);
  rw.field("w_possoft", c.rewards.w_possoft);
  rw.field("w_postight", c.rewards.w_postight);
  rw.field("w_heading", c.rewards.w_heading);
  rw.field("w_agile", c.rewards.w_agile);
  rw.field("w_stall", c.rewards.w_stall);
  rw.field("w_penalty", c.rewards.w_penalty);
  rw.field("w_smooth", c.rewards.w_smooth);
  rw.field("stall_speed", c.rewards.stall_speed);
  rw.field("correct_direction", c.rewards.correct_direction);

  auto& cem = b.sections["cem"];
  cem.field("population", c.cem.population);
  cem.field("elites", c.cem.elites);
  cem.field("iterations", c.cem.iterations);
  cem.field("init_std", c.cem.init_std);
  cem.field("std_floor", c.cem.std_floor);
  cem.field("episodes_per_eval", c.cem.episodes_per_eval);
  cem.field("curriculum", c.agile.curriculum);
  cem.field("warm_start", c.agile.warm_start);
  cem.field("imitation_episodes", c.agile.imitation_episodes);
  cem.field("imitation_epochs", c.agile.imitation_epochs);

  auto& ra = b.sections["ra"];
  ra.field("gamma", c.ra.gamma);
  ra.field("epochs", c.ra.epochs);
  ra.field("batches_per_epoch", c.ra.batches_per_epoch);
  ra.field("batch_size", c.ra.batch_size);
  ra.field("target_refresh_epochs", c.ra.target_refresh_epochs);
  ra.field("learning_rate", c.ra.learning_rate);
  ra.field("final_learning_rate", c.ra.final_learning_rate);
  ra.field("softened_zeta", c.ra.softened_zeta);
  ra.field("dataset_episodes", c.ra.dataset_episodes);
  ra.field("branch_fraction", c.ra.dataset.branch_fraction);
  ra.field("branch_vx_max", c.ra.dataset.branch_box.hi.vx);
  ra.field("hold_min", c.ra.dataset.hold_min);
  ra.field("hold_max", c.ra.dataset.hold_max);

  auto& sh = b.sections["shield"];
  sh.field("v_threshold", c.shield.v_threshold);
  sh.field("delta_t", c.shield.delta_t);
  sh.field("max_grad_steps", c.shield.max_grad_steps);
  sh.field("step_size", c.shield.step_size);
  sh.field("lagrange", c.shield.lagrange);
  sh.field("hysteresis", c.shield.hysteresis);
  sh.field("stop_when_infeasible", c.shield.stop_when_infeasible);
  b.box_lo = {c.shield.box.lo.vx, c.shield.box.lo.vy, c.shield.box.lo.omega};
  b.box_hi = {c.shield.box.hi.vx, c.shield.box.hi.vy, c.shield.box.hi.omega};
  sh.field("box_lo", b.box_lo);
  sh.field("box_hi", b.box_hi);

  auto& h = b.sections["harness"];
  h.field("episodes", c.harness.episodes);
  h.field("base_seed", c.harness.base_seed);
  h.field("seeds", c.harness.seeds);
  h.field("parallelism", c.harness.parallelism);
  b.variant = std::string(to_string(c.harness.variant));
  h.field("variant", b.variant);
  h.field("shield", c.harness.shield);
  h.field("ray_noise", c.harness.episode.ray_noise);
  h.field("ray_noise_amplitude", c.harness.episode.ray_noise_amplitude);
  h.field("illusion", c.harness.episode.illusion);
  h.field("d_max", c.harness.episode.d_max);
  h.field("r_robot", c.harness.episode.r_robot);
}

TwistCommand twist_from(const std::vector<double>& v, const char* key) {
  if (v.size() != 3) throw ConfigError(std::string("shield.") + key + " must have 3 entries");
  return {v[0], v[1], v[2]};
}

}  // namespace

SimConfig AppConfig::sim() const {
  SimConfig s;
  s.dynamics = dynamics;
  s.rewards = with_variant(rewards, harness.variant);
  s.shield = shield;
  s.episode = harness.episode;
  return s;
}

void validate(const AppConfig& cfg) {
  try {
    validate(cfg.dynamics);
    validate(cfg.rewards);
    validate(cfg.cem);
    validate(cfg.ra);
    validate(cfg.shield);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto& h = cfg.harness;
  if (h.episodes < 1) throw ConfigError("harness.episodes must be at least 1");
  if (h.seeds.empty()) throw ConfigError("harness.seeds must not be empty");
  if (h.parallelism < 1) throw ConfigError("harness.parallelism must be at least 1");
  if (!(h.episode.ray_noise_amplitude >= 0.0)) throw ConfigError("harness.ray_noise_amplitude");
  if (!(h.episode.d_max > 0.0) || !(h.episode.r_robot > 0.0)) {
    throw ConfigError("harness.d_max and harness.r_robot must be positive");
  }
  if (cfg.agile.imitation_episodes < 1 || cfg.agile.imitation_epochs < 1) {
    throw ConfigError("cem imitation counts must be positive");
  }
}

AppConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");

  AppConfig cfg;
  Binding b;
  bind(cfg, b);
  for (const auto& [name, body] : j.items()) {
    const auto it = b.sections.find(name);
    if (it == b.sections.end()) throw ConfigError("unknown section '" + name + "'");
    it->second.read(name, body);
  }
  cfg.harness.variant = parse_variant(b.variant);
  cfg.shield.box = CommandBox{twist_from(b.box_lo, "box_lo"), twist_from(b.box_hi, "box_hi")};
  validate(cfg);
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const AppConfig& cfg) {
  AppConfig copy = cfg;
  Binding b;
  bind(copy, b);
  json out = json::object();
  for (const auto& [name, section] : b.sections) out[name] = section.write();
  return out.dump(2);
}

std::string config_hash(const AppConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : dump_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace absnav
