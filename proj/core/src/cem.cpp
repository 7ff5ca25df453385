#include "absnav/cem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "absnav/errors.hpp"

namespace absnav {

void validate(const CemConfig& c) {
  if (c.population < 2 || c.elites < 1 || c.elites >= c.population) {
    throw ConfigError("cem: need 1 <= elites < population");
  }
  if (c.iterations < 1 || c.episodes_per_eval < 1) {
    throw ConfigError("cem: iterations and episodes_per_eval must be positive");
  }
  if (!(c.init_std > 0.0) || c.std_floor < 0.0) {
    throw ConfigError("cem: init_std must be positive and std_floor non-negative");
  }
}

CemResult cem_maximize(const PopulationObjective& objective, std::vector<double> init_mean,
                       const CemConfig& cfg, Rng& rng) {
  validate(cfg);
  const std::size_t dim = init_mean.size();
  const auto pop = static_cast<std::size_t>(cfg.population);
  const auto n_elite = static_cast<std::size_t>(cfg.elites);

  CemResult res;
  res.mean = std::move(init_mean);
  res.best = res.mean;
  res.best_score = -std::numeric_limits<double>::infinity();
  std::vector<double> stddev(dim, cfg.init_std);

  std::vector<std::vector<double>> candidates(pop, std::vector<double>(dim));
  std::vector<std::size_t> order(pop);
  for (int it = 0; it < cfg.iterations; ++it) {
    candidates[0] = res.mean;
    for (std::size_t c = 1; c < pop; ++c) {
      for (std::size_t d = 0; d < dim; ++d) {
        candidates[c][d] = res.mean[d] + stddev[d] * standard_normal(rng);
      }
    }
    const std::vector<double> scores = objective(candidates, it);
    if (scores.size() != pop) throw DimensionMismatch("objective returned the wrong score count");

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (scores[order[0]] > res.best_score) {
      res.best_score = scores[order[0]];
      res.best = candidates[order[0]];
    }

    for (std::size_t d = 0; d < dim; ++d) {
      double m = 0.0;
      for (std::size_t e = 0; e < n_elite; ++e) m += candidates[order[e]][d];
      m /= static_cast<double>(n_elite);
      double v = 0.0;
      for (std::size_t e = 0; e < n_elite; ++e) {
        const double diff = candidates[order[e]][d] - m;
        v += diff * diff;
      }
      v /= static_cast<double>(n_elite);
      res.mean[d] = m;
      stddev[d] = std::max(std::sqrt(v), cfg.std_floor);
    }

    CemIteration rec;
    rec.iteration = it;
    rec.best_return = res.best_score;
    rec.mean_return = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(pop);
    double sq = 0.0;
    for (double s : stddev) sq += s * s;
    rec.std_norm = std::sqrt(sq);
    res.history.push_back(rec);
  }
  return res;
}

void write_history_csv(const std::vector<CemIteration>& history, std::ostream& out) {
  out << "iteration,best_return,mean_return,std_norm\n";
  out.precision(10);
  for (const auto& h : history) {
    out << h.iteration << ',' << h.best_return << ',' << h.mean_return << ',' << h.std_norm << '\n';
  }
}

}  // namespace absnav
