#include "absnav/benchmark.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "absnav/errors.hpp"
#include "absnav/parallel.hpp"

namespace absnav {
namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_row(std::ostream& out, const std::string& variant, bool shield, const std::string& seed,
               double s, double c, double t, double vp, double vb) {
  out << variant << ',' << (shield ? "on" : "off") << ',' << seed << ',' << fmt(s) << ','
      << fmt(c) << ',' << fmt(t) << ',' << fmt(vp) << ',' << fmt(vb) << '\n';
}

constexpr const char* kHeader =
    "variant,shield,seed,success_pct,collision_pct,timeout_pct,vpeak_mean,vbar_mean\n";

}  // namespace

WorldConfig benchmark_world(std::uint64_t base_seed, int index) {
  return sample_world(WorldMode::kTest, episode_seed(base_seed, static_cast<std::uint64_t>(index)));
}

std::uint64_t benchmark_episode_seed(std::uint64_t base_seed, int index) {
  return mix_seed(episode_seed(base_seed, static_cast<std::uint64_t>(index)));
}

SeedReport summarize(std::uint64_t seed, std::vector<EpisodeSummary> summaries) {
  SeedReport r;
  r.seed = seed;
  r.episodes = static_cast<int>(summaries.size());
  double vp = 0.0;
  double vb = 0.0;
  for (const auto& s : summaries) {
    switch (s.outcome) {
      case Outcome::kSuccess:
        ++r.successes;
        vp += s.peak_speed;
        vb += s.mean_speed;
        break;
      case Outcome::kCollision: ++r.collisions; break;
      case Outcome::kTimeout: ++r.timeouts; break;
    }
  }
  if (r.episodes > 0) {
    const double n = r.episodes;
    r.success_pct = 100.0 * r.successes / n;
    r.collision_pct = 100.0 * r.collisions / n;
    r.timeout_pct = 100.0 * r.timeouts / n;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.vpeak_mean = r.successes > 0 ? vp / r.successes : nan;
  r.vbar_mean = r.successes > 0 ? vb / r.successes : nan;
  r.summaries = std::move(summaries);
  return r;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd m;
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

BenchmarkReport run_benchmark(const std::vector<PolicyStack>& stacks, const SimConfig& sim,
                              const BenchmarkConfig& cfg) {
  if (cfg.n_episodes < 1) throw ConfigError("benchmark needs at least one episode");
  SimConfig c = sim;
  c.episode.record_steps = false;

  BenchmarkReport report;
  report.variant = std::string(to_string(cfg.variant));
  report.shield = cfg.shield;
  report.config_hash = cfg.config_hash;

  const auto n = static_cast<std::size_t>(cfg.n_episodes);
  std::vector<WorldConfig> worlds(n);
  parallel_for(n, cfg.parallelism, [&](std::size_t i) {
    worlds[i] = benchmark_world(cfg.base_seed, static_cast<int>(i));
  });

  std::vector<double> succ, coll, time, vpeak, vbar;
  for (const auto& stack : stacks) {
    const MlpParams* value = cfg.shield && stack.value_net ? &*stack.value_net : nullptr;
    std::vector<EpisodeSummary> summaries(n);
    parallel_for(n, cfg.parallelism, [&](std::size_t i) {
      const auto trace = run_episode(worlds[i], stack.agile, value, c,
                                     benchmark_episode_seed(cfg.base_seed, static_cast<int>(i)));
      summaries[i] = {trace.outcome, trace.peak_speed, trace.mean_speed, trace.recovery_steps};
    });
    auto r = summarize(stack.seed, std::move(summaries));
    succ.push_back(r.success_pct);
    coll.push_back(r.collision_pct);
    time.push_back(r.timeout_pct);
    if (!std::isnan(r.vpeak_mean)) vpeak.push_back(r.vpeak_mean);
    if (!std::isnan(r.vbar_mean)) vbar.push_back(r.vbar_mean);
    report.per_seed.push_back(std::move(r));
  }
  report.success_pct = mean_std(succ);
  report.collision_pct = mean_std(coll);
  report.timeout_pct = mean_std(time);
  report.vpeak_mean = mean_std(vpeak);
  report.vbar_mean = mean_std(vbar);
  return report;
}

void write_metrics_csv(const BenchmarkReport& report, std::ostream& out, bool header) {
  if (header) out << kHeader;
  for (const auto& r : report.per_seed) {
    write_row(out, report.variant, report.shield, std::to_string(r.seed), r.success_pct,
              r.collision_pct, r.timeout_pct, r.vpeak_mean, r.vbar_mean);
  }
  write_row(out, report.variant, report.shield, "mean", report.success_pct.mean,
            report.collision_pct.mean, report.timeout_pct.mean, report.vpeak_mean.mean,
            report.vbar_mean.mean);
}

std::vector<ThresholdRow> sweep_threshold(const std::vector<PolicyStack>& stacks,
                                          const std::vector<double>& thresholds,
                                          const SimConfig& sim, const BenchmarkConfig& cfg) {
  for (double t : thresholds) {
    if (!(t < 0.0)) throw ConfigError("value thresholds must be negative");
  }
  std::vector<ThresholdRow> rows;
  BenchmarkConfig b = cfg;
  b.shield = true;
  for (double t : thresholds) {
    SimConfig s = sim;
    s.shield.v_threshold = t;
    rows.push_back({t, run_benchmark(stacks, s, b)});
  }
  return rows;
}

AblationResult ablate_zeta(const std::vector<AblationInput>& inputs, const RATrainConfig& ra,
                           const SimConfig& sim, const BenchmarkConfig& cfg) {
  AblationResult result;
  std::vector<PolicyStack> soft, raw, plain;
  for (const auto& in : inputs) {
    if (!in.dataset) throw EmptyDataset("ablation input without a dataset");
    RATrainConfig c = ra;
    c.seed = in.seed;
    c.softened_zeta = true;
    result.softened_nets.push_back(in.softened_net ? *in.softened_net
                                                   : train_ra(*in.dataset, c).net);
    c.softened_zeta = false;
    result.raw_nets.push_back(train_ra(*in.dataset, c).net);
    soft.push_back({in.seed, in.agile, result.softened_nets.back()});
    raw.push_back({in.seed, in.agile, result.raw_nets.back()});
    plain.push_back({in.seed, in.agile, std::nullopt});
  }
  BenchmarkConfig on = cfg;
  on.shield = true;
  BenchmarkConfig off = cfg;
  off.shield = false;
  result.rows.push_back({"softened", run_benchmark(soft, sim, on)});
  result.rows.push_back({"raw", run_benchmark(raw, sim, on)});
  result.rows.push_back({"agile-only", run_benchmark(plain, sim, off)});
  return result;
}

void write_table_csv(const std::vector<AblationRow>& rows, std::ostream& out) {
  out << kHeader;
  for (const auto& row : rows) {
    BenchmarkReport r = row.report;
    r.variant = row.label;
    write_metrics_csv(r, out, false);
  }
}

void write_table_csv(const std::vector<ThresholdRow>& rows, std::ostream& out) {
  out << "threshold," << kHeader;
  for (const auto& row : rows) {
    std::ostringstream body;
    write_metrics_csv(row.report, body, false);
    std::istringstream lines(body.str());
    std::string line;
    while (std::getline(lines, line)) out << fmt(row.threshold) << ',' << line << '\n';
  }
}

}  // namespace absnav
