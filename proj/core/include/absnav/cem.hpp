#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "absnav/random.hpp"

namespace absnav {

struct CemConfig {
  int population = 64;
  int elites = 8;
  int iterations = 100;
  double init_std = 0.3;
  double std_floor = 0.02;
  int episodes_per_eval = 8;
};

void validate(const CemConfig& cfg);

struct CemIteration {
  int iteration = 0;
  double best_return = 0.0;  ///< best score seen so far
  double mean_return = 0.0;  ///< population mean this iteration
  double std_norm = 0.0;     ///< L2 norm of the sampling std after the refit
};

struct CemResult {
  std::vector<double> best;
  double best_score = 0.0;
  std::vector<double> mean;
  std::vector<CemIteration> history;
};

/// Scores every candidate of one iteration (higher is better).
using PopulationObjective =
    std::function<std::vector<double>(const std::vector<std::vector<double>>& candidates,
                                      int iteration)>;

/// Cross-entropy maximisation with a diagonal Gaussian. Candidate 0 of each
/// population is the current mean; the rest are sampled. The mean and std are
/// refit to the elites, with the std floored at std_floor.
[[nodiscard]] CemResult cem_maximize(const PopulationObjective& objective,
                                     std::vector<double> init_mean, const CemConfig& cfg,
                                     Rng& rng);

void write_history_csv(const std::vector<CemIteration>& history, std::ostream& out);

}  // namespace absnav
