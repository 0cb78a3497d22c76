#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "engine.hpp"
#include "policy.hpp"

namespace tetrisw {

struct EpisodeResult {
  std::uint64_t seed = 0;
  double total_reward = 0.0;
  std::int64_t lines = 0;
  std::int64_t pieces = 0;
  bool truncated = false;  // stopped at the piece cap, not by game over
  double millis = 0.0;
};

struct PlayOptions {
  bool two_piece = false;
  LookaheadOptions lookahead;
};

// Called after every placement with the post-step episode.
using StepObserver =
    std::function<void(const Episode&, const Decision&, double reward)>;

// Runs the policy until game over or `piece_cap` placements.
EpisodeResult play_episode(const LinearPolicy& policy, const GameConfig& game,
                           std::uint64_t seed, std::int64_t piece_cap,
                           const PlayOptions& options = {},
                           const StepObserver& observer = {});

// Plays the fixed S, Z, S, Z, ... sequence that forces every policy to lose.
EpisodeResult adversarial_sz_episode(const LinearPolicy& policy,
                                     const GameConfig& game,
                                     std::int64_t piece_cap = 100000);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
  // Normal-approximation 95% interval of the mean.
  double ci_low = 0.0;
  double ci_high = 0.0;
};

Summary summarize(std::span<const double> values);
double median_of(std::vector<double> values);

struct BenchReport {
  std::vector<EpisodeResult> episodes;  // in seed order
  Summary lines;
  std::int64_t total_pieces = 0;
  double wall_ms = 0.0;
  double placements_per_second = 0.0;
};

BenchReport run_benchmark(const LinearPolicy& policy, const GameConfig& game,
                          std::span<const std::uint64_t> seeds,
                          std::int64_t piece_cap, int jobs,
                          const PlayOptions& options = {});

}  // namespace tetrisw
