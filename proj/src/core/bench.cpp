#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace tetrisw {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

EpisodeResult play_episode(const LinearPolicy& policy, const GameConfig& game,
                           std::uint64_t seed, std::int64_t piece_cap,
                           const PlayOptions& options,
                           const StepObserver& observer) {
  if (piece_cap < 1) throw std::invalid_argument("piece cap must be >= 1");
  policy.validate(game.width);
  const auto start = Clock::now();
  Episode ep(game, seed);
  while (!ep.finished() && ep.pieces_placed() < piece_cap) {
    const Decision d =
        options.two_piece
            ? select_action_two_piece(policy, ep.board(), ep.current_piece(),
                                      ep.next_piece(), options.lookahead)
            : select_action(policy, ep.board(), ep.current_piece());
    const double reward = ep.step(d.placement);
    if (observer) observer(ep, d, reward);
  }
  EpisodeResult r;
  r.seed = seed;
  r.total_reward = ep.score();
  r.lines = ep.lines_cleared();
  r.pieces = ep.pieces_placed();
  r.truncated = !ep.finished();
  r.millis = elapsed_ms(start);
  return r;
}

EpisodeResult adversarial_sz_episode(const LinearPolicy& policy,
                                     const GameConfig& game,
                                     std::int64_t piece_cap) {
  GameConfig sz = game;
  sz.piece_rule = PieceRule::kAlternatingSz;
  return play_episode(policy, sz, 0, piece_cap);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / 2.0;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1)) : 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.median = median_of({values.begin(), values.end()});
  const double half = 1.96 * s.std / std::sqrt(static_cast<double>(s.count));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

BenchReport run_benchmark(const LinearPolicy& policy, const GameConfig& game,
                          std::span<const std::uint64_t> seeds,
                          std::int64_t piece_cap, int jobs,
                          const PlayOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("need at least one game");
  game.validate();
  policy.validate(game.width);
  const auto start = Clock::now();
  BenchReport report;
  report.episodes.resize(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    report.episodes[i] = play_episode(policy, game, seeds[i], piece_cap, options);
  });
  report.wall_ms = elapsed_ms(start);

  std::vector<double> lines;
  for (const auto& e : report.episodes) {
    lines.push_back(static_cast<double>(e.lines));
    report.total_pieces += e.pieces;
  }
  report.lines = summarize(lines);
  if (report.wall_ms > 0)
    report.placements_per_second =
        static_cast<double>(report.total_pieces) / (report.wall_ms / 1000.0);
  return report;
}

}  // namespace tetrisw
