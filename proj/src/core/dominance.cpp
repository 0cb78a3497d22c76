#include "dominance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bench.hpp"
#include "parallel.hpp"

namespace tetrisw {

namespace {

using Matrix = std::vector<std::vector<double>>;

// Rows where larger is better in every column.
Matrix oriented(std::span<const FeatureVector> candidates,
                const OrientationSpec& orient) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to filter");
  const std::size_t d = orient.size();
  Matrix m;
  m.reserve(candidates.size());
  for (const auto& fv : candidates) {
    if (fv.values.size() != d || fv.set != candidates.front().set)
      throw std::invalid_argument("candidates do not share one feature set");
    std::vector<double> row(d);
    for (std::size_t k = 0; k < d; ++k)
      row[k] = orient[k] == Direction::kHigherIsBetter ? fv.values[k]
                                                       : -fv.values[k];
    m.push_back(std::move(row));
  }
  return m;
}

std::vector<std::size_t> pareto_survivors(const Matrix& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < n && !dominated; ++j) {
      if (j == i) continue;
      bool all_ge = true;
      bool any_gt = false;
      for (std::size_t k = 0; k < m[i].size(); ++k) {
        if (m[j][k] < m[i][k]) {
          all_ge = false;
          break;
        }
        if (m[j][k] > m[i][k]) any_gt = true;
      }
      dominated = all_ge && (any_gt || j < i);
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

}  // namespace

OrientationSpec orientation_from_policy(const LinearPolicy& policy, int width) {
  OrientationSpec o = feature_orientation(policy.set, width);
  for (std::size_t k = 0; k < o.size() && k < policy.weights.size(); ++k) {
    if (policy.weights[k] > 0) o[k] = Direction::kHigherIsBetter;
    if (policy.weights[k] < 0) o[k] = Direction::kLowerIsBetter;
  }
  return o;
}

ImportanceOrder importance_from_policy(const LinearPolicy& policy) {
  ImportanceOrder order(policy.weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(policy.weights[a]) > std::abs(policy.weights[b]);
  });
  return order;
}

std::vector<std::size_t> simple_dominance_filter(
    std::span<const FeatureVector> candidates, const OrientationSpec& orient) {
  return pareto_survivors(oriented(candidates, orient));
}

std::vector<std::size_t> cumulative_dominance_filter(
    std::span<const FeatureVector> candidates, const OrientationSpec& orient,
    const ImportanceOrder& order) {
  std::vector<bool> seen(orient.size(), false);
  if (order.size() != orient.size())
    throw std::invalid_argument("importance order is not a permutation");
  for (int k : order) {
    if (k < 0 || k >= static_cast<int>(orient.size()) || seen[k])
      throw std::invalid_argument("importance order is not a permutation");
    seen[k] = true;
  }
  Matrix m = oriented(candidates, orient);
  for (auto& row : m) {
    std::vector<double> prefix(row.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) prefix[k] = acc += row[order[k]];
    row = std::move(prefix);
  }
  return pareto_survivors(m);
}

std::vector<FeatureVector> standardize(std::span<const FeatureVector> candidates) {
  std::vector<FeatureVector> out(candidates.begin(), candidates.end());
  if (out.empty()) return out;
  const std::size_t n = out.size();
  const std::size_t d = out.front().values.size();
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (const auto& fv : out) mean += fv.values[k];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& fv : out) var += (fv.values[k] - mean) * (fv.values[k] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (auto& fv : out)
      fv.values[k] = sd > 0.0 ? (fv.values[k] - mean) / sd : 0.0;
  }
  return out;
}

FilterReport filter_stats(const LinearPolicy& policy, std::size_t n_games,
                          std::uint64_t seed, const GameConfig& game,
                          const FilterOptions& options) {
  if (n_games < 1) throw std::invalid_argument("need at least one game");
  game.validate();
  policy.validate(game.width);
  const OrientationSpec orient = orientation_from_policy(policy, game.width);
  const ImportanceOrder order = importance_from_policy(policy);
  const auto seeds = expand_seeds(seed, n_games);

  std::vector<std::vector<DecisionRecord>> per_game(n_games);
  std::vector<char> nested(n_games, 1);
  parallel_for(n_games, options.jobs, [&](std::size_t g) {
    Episode ep(game, seeds[g]);
    auto& records = per_game[g];
    while (!ep.finished() && ep.pieces_placed() < options.piece_cap) {
      const Board& board = ep.board();
      std::vector<FeatureVector> live;
      std::vector<FeatureVector> all;
      for_each_placement(board, ep.current_piece(), [&](const Placement& p) {
        const MoveOutcome o = drop(board, p);
        FeatureVector fv = extract(policy.set, {board, o});
        if (!o.terminal) live.push_back(fv);
        all.push_back(std::move(fv));
      });
      std::vector<FeatureVector>& cands = live.empty() ? all : live;
      if (options.standardize) cands = standardize(cands);
      const auto simple = simple_dominance_filter(cands, orient);
      const auto cumulative = cumulative_dominance_filter(cands, orient, order);
      const bool subset = std::includes(simple.begin(), simple.end(),
                                        cumulative.begin(), cumulative.end());
      if (!subset || cumulative.empty()) nested[g] = 0;
      records.push_back({static_cast<std::uint32_t>(g),
                         static_cast<std::uint32_t>(ep.pieces_placed()),
                         ep.current_piece(), static_cast<int>(cands.size()),
                         static_cast<int>(simple.size()),
                         static_cast<int>(cumulative.size())});
      ep.step(select_action(policy, board, ep.current_piece()).placement);
    }
  });

  FilterReport report;
  std::vector<double> raw, simple, cumulative;
  for (std::size_t g = 0; g < n_games; ++g) {
    report.nesting_holds = report.nesting_holds && nested[g];
    for (const auto& r : per_game[g]) {
      report.records.push_back(r);
      raw.push_back(r.raw);
      simple.push_back(r.simple);
      cumulative.push_back(r.cumulative);
    }
  }
  report.median_raw = median_of(raw);
  report.median_simple = median_of(simple);
  report.median_cumulative = median_of(cumulative);
  return report;
}

}  // namespace tetrisw
