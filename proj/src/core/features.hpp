#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"

namespace tetrisw {

// Every board-level primitive used by the named feature sets. Boundary
// convention: side walls are full for row transitions and wells; the floor
// is full and the space above the top row is empty for column transitions.
struct GridFeatures {
  int holes = 0;
  int connected_holes = 0;
  std::vector<int> column_heights;
  std::vector<int> height_diffs;  // |h[c] - h[c+1]|
  int sum_abs_height_diffs = 0;
  double mean_height = 0.0;
  int pile_height = 0;
  int max_minus_min_height = 0;
  int row_transitions = 0;
  int column_transitions = 0;
  int cumulative_wells = 0;
  int max_well_depth = 0;
  int sum_well_depths = 0;
  int hole_depth = 0;
  int rows_with_holes = 0;
  int pattern_diversity = 0;
  int occupied_cells = 0;
  int weighted_occupied_cells = 0;
  std::array<double, 5> rbf{};
};

GridFeatures grid_features(const Board& board);

// Individual primitives; grid_features is assembled from these.
int holes(const Board& board);
int row_transitions(const Board& board);
int column_transitions(const Board& board);

struct HoleStats {
  int holes = 0;
  int connected = 0;
  int depth = 0;
  int rows_with_holes = 0;
};
HoleStats hole_stats(const Board& board);

struct WellStats {
  int cumulative = 0;  // sum over wells of d(d+1)/2
  int max_depth = 0;
  int sum_depths = 0;
};
WellStats well_stats(const Board& board);

int pattern_diversity(const Board& board);
std::array<double, 5> height_rbf(const Board& board);

struct MoveFeatures {
  double landing_height = 0.0;
  int eroded_cells = 0;
  int cleared_lines = 0;
};
MoveFeatures move_features(const MoveOutcome& outcome);

// post - pre for the Lagoudakis state features.
struct DeltaFeatures {
  int holes = 0;
  int pile_height = 0;
  int sum_abs_height_diffs = 0;
  double mean_height = 0.0;
};
DeltaFeatures delta_features(const Board& pre, const Board& post);

enum class FeatureSetId { kBertsekas, kLagoudakis, kDellacherie, kBohm, kBcts, kDt, kRbf };

inline constexpr std::array<FeatureSetId, 7> kAllFeatureSets{
    FeatureSetId::kBertsekas, FeatureSetId::kLagoudakis,
    FeatureSetId::kDellacherie, FeatureSetId::kBohm,
    FeatureSetId::kBcts, FeatureSetId::kDt, FeatureSetId::kRbf};

std::string_view feature_set_name(FeatureSetId id);
std::optional<FeatureSetId> feature_set_from_name(std::string_view name);

// Bertsekas depends on board width (2w + 1); the others are fixed.
int feature_dimension(FeatureSetId id, int width = 10);
std::vector<std::string> feature_names(FeatureSetId id, int width = 10);

enum class Direction { kHigherIsBetter, kLowerIsBetter };

// Beneficial direction of each feature in a set.
std::vector<Direction> feature_orientation(FeatureSetId id, int width = 10);

inline constexpr int kMaxFeatureDimension = 2 * kMaxWidth + 1;

struct FeatureContext {
  const Board& pre;
  const MoveOutcome& outcome;
};

struct FeatureVector {
  FeatureSetId set;
  std::vector<double> values;
};

FeatureVector extract(FeatureSetId set, const FeatureContext& ctx);

// Allocation-free variant for hot loops; `out` must hold at least
// feature_dimension(set, width) values. Returns the number written.
int extract_into(FeatureSetId set, const FeatureContext& ctx,
                 std::span<double> out);

// Outcome that leaves `board` untouched, for evaluating a bare state.
MoveOutcome null_outcome(const Board& board);

}  // namespace tetrisw
