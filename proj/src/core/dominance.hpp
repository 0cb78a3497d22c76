#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "engine.hpp"
#include "features.hpp"
#include "policy.hpp"

namespace tetrisw {

using OrientationSpec = std::vector<Direction>;
// Feature indices, most important first.
using ImportanceOrder = std::vector<int>;

// Weight sign per feature; zero weights fall back to the set's metadata.
OrientationSpec orientation_from_policy(const LinearPolicy& policy, int width = 10);
// Descending |weight|, stable on index.
ImportanceOrder importance_from_policy(const LinearPolicy& policy);

// Returns the indices (ascending) of candidates not dominated by any other.
// `a` dominates `b` when a is at least as good on every oriented feature and
// strictly better on one. Of exact duplicates only the first survives.
// Throws std::invalid_argument on an empty list or mismatched dimensions.
std::vector<std::size_t> simple_dominance_filter(
    std::span<const FeatureVector> candidates, const OrientationSpec& orient);

// Same rule applied to prefix sums of the oriented features taken in
// importance order. Throws std::invalid_argument if `order` is not a
// permutation.
std::vector<std::size_t> cumulative_dominance_filter(
    std::span<const FeatureVector> candidates, const OrientationSpec& orient,
    const ImportanceOrder& order);

// Rescales each feature to zero mean and unit variance across candidates
// (constant features become 0). Preserves simple dominance.
std::vector<FeatureVector> standardize(std::span<const FeatureVector> candidates);

struct DecisionRecord {
  std::uint32_t game = 0;
  std::uint32_t step = 0;
  PieceKind piece = PieceKind::I;
  int raw = 0;  // non-terminal placements (all placements if none are)
  int simple = 0;
  int cumulative = 0;
};

struct FilterReport {
  std::vector<DecisionRecord> records;  // ordered by (game, step)
  double median_raw = 0.0;
  double median_simple = 0.0;
  double median_cumulative = 0.0;
  // 1 <= cumulative <= simple <= raw and subset nesting held everywhere.
  bool nesting_holds = true;
};

struct FilterOptions {
  std::int64_t piece_cap = 1000;
  int jobs = 1;
  bool standardize = false;
};

// Plays seeded games with `policy` and filters the candidate set at every
// decision using orientation and importance derived from the policy.
FilterReport filter_stats(const LinearPolicy& policy, std::size_t n_games,
                          std::uint64_t seed, const GameConfig& game,
                          const FilterOptions& options = {});

}  // namespace tetrisw
