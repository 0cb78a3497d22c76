#include "optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "bench.hpp"
#include "parallel.hpp"

namespace tetrisw {

void CeConfig::validate() const {
  if (population < 1) throw std::invalid_argument("population must be >= 1");
  if (elite < 1 || elite > population)
    throw std::invalid_argument("elite must be in [1, population]");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (games_per_candidate < 1)
    throw std::invalid_argument("games per candidate must be >= 1");
  if (!(initial_std >= 0.0)) throw std::invalid_argument("std must be >= 0");
  if (!(noise_b > 0.0)) throw std::invalid_argument("noise_b must be > 0");
  if (piece_cap < 1) throw std::invalid_argument("piece cap must be >= 1");
}

double CeConfig::noise_at(int generation) const {
  return std::max(noise_a - generation / noise_b, 0.0);
}

CeConfig default_ce_config(const GameConfig& game) {
  CeConfig cfg;
  cfg.games_per_candidate = game.height >= 20 ? 5 : 1;
  return cfg;
}

double evaluate_candidate(std::span<const double> weights, FeatureSetId set,
                          const GameConfig& game, int n_games,
                          std::uint64_t seed, std::int64_t piece_cap) {
  if (n_games < 1) throw std::invalid_argument("need at least one game");
  const LinearPolicy policy{"candidate", set, {weights.begin(), weights.end()}};
  double total = 0.0;
  for (std::uint64_t s : expand_seeds(seed, static_cast<std::size_t>(n_games)))
    total += play_episode(policy, game, s, piece_cap).total_reward;
  return total / n_games;
}

TrainResult ce_train(const CeConfig& cfg, const GameConfig& game,
                     FeatureSetId set) {
  cfg.validate();
  game.validate();
  const std::size_t dim = static_cast<std::size_t>(feature_dimension(set, game.width));
  std::vector<double> mean = cfg.initial_mean.empty()
                                 ? std::vector<double>(dim, 0.0)
                                 : cfg.initial_mean;
  if (mean.size() != dim)
    throw std::invalid_argument("initial mean has the wrong dimension");
  std::vector<double> var(dim, cfg.initial_std * cfg.initial_std);

  std::mt19937_64 sampler(cfg.seed);
  std::uint64_t seed_state = cfg.seed ^ 0x5eed5eed5eed5eedull;
  std::normal_distribution<double> normal(0.0, 1.0);

  TrainResult result;
  result.best = {"ce-" + std::string(feature_set_name(set)), set, mean};
  result.best_score = -std::numeric_limits<double>::infinity();

  const auto n = static_cast<std::size_t>(cfg.population);
  for (int t = 1; t <= cfg.generations; ++t) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> pop(n, std::vector<double>(dim));
    for (auto& w : pop)
      for (std::size_t k = 0; k < dim; ++k)
        w[k] = mean[k] + std::sqrt(var[k]) * normal(sampler);

    const std::uint64_t eval_seed = splitmix64(seed_state);
    std::vector<double> scores(n);
    parallel_for(n, cfg.jobs, [&](std::size_t i) {
      scores[i] = evaluate_candidate(pop[i], set, game, cfg.games_per_candidate,
                                     eval_seed, cfg.piece_cap);
    });

    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    const auto e = static_cast<std::size_t>(cfg.elite);
    GenerationRecord rec;
    rec.generation = t;
    rec.best_score = scores[rank[0]];
    if (rec.best_score > result.best_score) {
      result.best_score = rec.best_score;
      result.best.weights = pop[rank[0]];
    }
    rec.running_best = result.best_score;

    std::vector<double> next_mean(dim, 0.0), next_var(dim, 0.0);
    for (std::size_t j = 0; j < e; ++j) {
      rec.mean_elite_score += scores[rank[j]];
      for (std::size_t k = 0; k < dim; ++k) next_mean[k] += pop[rank[j]][k];
    }
    rec.mean_elite_score /= static_cast<double>(e);
    for (auto& m : next_mean) m /= static_cast<double>(e);
    for (std::size_t j = 0; j < e; ++j)
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = pop[rank[j]][k] - next_mean[k];
        next_var[k] += d * d;
      }
    rec.noise = cfg.noise_at(t);
    for (auto& v : next_var) v = v / static_cast<double>(e) + rec.noise;
    mean = std::move(next_mean);
    var = std::move(next_var);

    rec.mean = mean;
    for (double v : var) rec.std.push_back(std::sqrt(v));
    rec.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start).count();
    result.log.push_back(std::move(rec));
  }
  return result;
}

}  // namespace tetrisw
