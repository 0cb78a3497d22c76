#pragma once

#include <cstdint>
#include <vector>

#include "engine.hpp"
#include "features.hpp"
#include "policy.hpp"

namespace tetrisw {

struct CeConfig {
  int population = 100;
  int elite = 10;
  int generations = 50;
  int games_per_candidate = 1;
  std::vector<double> initial_mean;  // empty means zeros
  double initial_std = 100.0;
  // Variance noise after generation t is max(noise_a - t / noise_b, 0).
  double noise_a = 5.0;
  double noise_b = 10.0;
  std::uint64_t seed = 0;
  std::int64_t piece_cap = 200000;
  int jobs = 1;

  void validate() const;
  double noise_at(int generation) const;
};

// Defaults per grid: one game per candidate on short grids, five on 20-row.
CeConfig default_ce_config(const GameConfig& game);

struct GenerationRecord {
  int generation = 0;  // 1-based
  double mean_elite_score = 0.0;
  double best_score = 0.0;     // best candidate of this generation
  double running_best = 0.0;   // best candidate of any generation so far
  double noise = 0.0;
  std::vector<double> mean;    // distribution after the refit
  std::vector<double> std;
  double millis = 0.0;
};

struct TrainResult {
  LinearPolicy best;
  double best_score = 0.0;
  std::vector<GenerationRecord> log;
};

// Mean total reward of the induced linear policy over `n_games` episodes
// seeded from expand_seeds(seed, n_games), each truncated at `piece_cap`.
double evaluate_candidate(std::span<const double> weights, FeatureSetId set,
                          const GameConfig& game, int n_games,
                          std::uint64_t seed, std::int64_t piece_cap);

// Cross-entropy search over a diagonal Gaussian. All candidates of one
// generation are scored on the same game seeds.
TrainResult ce_train(const CeConfig& cfg, const GameConfig& game,
                     FeatureSetId set);

}  // namespace tetrisw
