#include "features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tetrisw {

namespace {

template <typename Fn>
void for_each_bit(std::uint32_t mask, Fn&& fn) {
  while (mask) {
    fn(std::countr_zero(mask));
    mask &= mask - 1;
  }
}

int sum_abs_diffs(const Board& b) {
  int s = 0;
  for (int c = 0; c + 1 < b.width(); ++c)
    s += std::abs(b.column_height(c) - b.column_height(c + 1));
  return s;
}

double mean_height(const Board& b) {
  int s = 0;
  for (int c = 0; c < b.width(); ++c) s += b.column_height(c);
  return static_cast<double>(s) / b.width();
}

int min_height(const Board& b) {
  int m = b.column_height(0);
  for (int c = 1; c < b.width(); ++c) m = std::min(m, b.column_height(c));
  return m;
}

int weighted_cells(const Board& b) {
  int s = 0;
  for (int r = 0; r < b.pile_height(); ++r)
    s += std::popcount(b.row(r)) * (r + 1);
  return s;
}

}  // namespace

int holes(const Board& board) {
  int n = 0;
  std::uint32_t covered = 0;
  for (int r = board.pile_height() - 1; r >= 0; --r) {
    n += std::popcount(covered & ~board.row(r));
    covered |= board.row(r);
  }
  return n;
}

HoleStats hole_stats(const Board& board) {
  HoleStats s;
  std::array<int, kMaxWidth> above{};
  std::uint32_t covered = 0;
  std::uint32_t prev_holes = 0;
  for (int r = board.pile_height() - 1; r >= 0; --r) {
    const std::uint32_t row = board.row(r);
    const std::uint32_t hole_mask = covered & ~row;
    s.holes += std::popcount(hole_mask);
    s.connected += std::popcount(hole_mask & ~prev_holes);
    if (hole_mask) ++s.rows_with_holes;
    for_each_bit(hole_mask, [&](int c) { s.depth += above[c]; });
    for_each_bit(row, [&](int c) { ++above[c]; });
    prev_holes = hole_mask;
    covered |= row;
  }
  return s;
}

int row_transitions(const Board& board) {
  const int w = board.width();
  const std::uint32_t walls = 1u | (1u << (w + 1));
  const std::uint32_t pair_mask = (1u << (w + 1)) - 1u;
  int n = 0;
  for (int r = 0; r < board.pile_height(); ++r) {
    const std::uint32_t x = (board.row(r) << 1) | walls;
    n += std::popcount((x ^ (x >> 1)) & pair_mask);
  }
  // Empty rows contribute one transition at each wall.
  return n + 2 * (board.height() - board.pile_height());
}

int column_transitions(const Board& board) {
  std::uint32_t prev = board.full_mask();  // floor
  int n = 0;
  for (int r = 0; r < board.pile_height(); ++r) {
    n += std::popcount(board.row(r) ^ prev);
    prev = board.row(r);
  }
  return n + std::popcount(prev);  // into the empty space above
}

WellStats well_stats(const Board& board) {
  WellStats s;
  const int w = board.width();
  const std::uint32_t full = board.full_mask();
  std::array<int, kMaxWidth> run{};
  std::uint32_t active = 0;
  std::uint32_t covered = 0;
  auto close = [&](int c) {
    s.max_depth = std::max(s.max_depth, run[c]);
    run[c] = 0;
  };
  for (int r = board.pile_height() - 1; r >= 0; --r) {
    const std::uint32_t row = board.row(r);
    const std::uint32_t left_full = (row << 1) | 1u;
    const std::uint32_t right_full = (row >> 1) | (1u << (w - 1));
    const std::uint32_t wells = ~row & ~covered & left_full & right_full & full;
    for_each_bit(active & ~wells, close);
    for_each_bit(wells, [&](int c) {
      ++run[c];
      s.cumulative += run[c];
      ++s.sum_depths;
    });
    active = wells;
    covered |= row;
  }
  for_each_bit(active, close);
  return s;
}

int pattern_diversity(const Board& board) {
  std::uint32_t seen = 0;
  for (int c = 0; c + 1 < board.width(); ++c) {
    const int d = board.column_height(c) - board.column_height(c + 1);
    if (d >= -2 && d <= 2) seen |= 1u << (d + 2);
  }
  return std::popcount(seen);
}

std::array<double, 5> height_rbf(const Board& board) {
  const double c = mean_height(board);
  const double h = board.height();
  const double width = h / 5.0;
  std::array<double, 5> out{};
  for (int i = 0; i < 5; ++i) {
    const double d = std::abs(c - i * h / 4.0);
    out[i] = std::exp(-(d * d) / (2.0 * width * width));
  }
  return out;
}

GridFeatures grid_features(const Board& board) {
  GridFeatures g;
  const int w = board.width();
  const HoleStats hs = hole_stats(board);
  const WellStats ws = well_stats(board);
  g.holes = hs.holes;
  g.connected_holes = hs.connected;
  g.hole_depth = hs.depth;
  g.rows_with_holes = hs.rows_with_holes;
  g.column_heights.resize(w);
  for (int c = 0; c < w; ++c) g.column_heights[c] = board.column_height(c);
  g.height_diffs.resize(w - 1);
  for (int c = 0; c + 1 < w; ++c)
    g.height_diffs[c] = std::abs(g.column_heights[c] - g.column_heights[c + 1]);
  g.sum_abs_height_diffs = sum_abs_diffs(board);
  g.mean_height = mean_height(board);
  g.pile_height = board.pile_height();
  g.max_minus_min_height = board.pile_height() - min_height(board);
  g.row_transitions = row_transitions(board);
  g.column_transitions = column_transitions(board);
  g.cumulative_wells = ws.cumulative;
  g.max_well_depth = ws.max_depth;
  g.sum_well_depths = ws.sum_depths;
  g.pattern_diversity = pattern_diversity(board);
  g.occupied_cells = board.cell_count();
  g.weighted_occupied_cells = weighted_cells(board);
  g.rbf = height_rbf(board);
  return g;
}

MoveFeatures move_features(const MoveOutcome& outcome) {
  return {outcome.landing_height, outcome.eroded_cells, outcome.lines_cleared};
}

DeltaFeatures delta_features(const Board& pre, const Board& post) {
  return {holes(post) - holes(pre), post.pile_height() - pre.pile_height(),
          sum_abs_diffs(post) - sum_abs_diffs(pre),
          mean_height(post) - mean_height(pre)};
}

std::string_view feature_set_name(FeatureSetId id) {
  switch (id) {
    case FeatureSetId::kBertsekas: return "bertsekas";
    case FeatureSetId::kLagoudakis: return "lagoudakis";
    case FeatureSetId::kDellacherie: return "dellacherie";
    case FeatureSetId::kBohm: return "bohm";
    case FeatureSetId::kBcts: return "bcts";
    case FeatureSetId::kDt: return "dt";
    case FeatureSetId::kRbf: return "rbf";
  }
  return "unknown";
}

std::optional<FeatureSetId> feature_set_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  for (FeatureSetId id : kAllFeatureSets)
    if (feature_set_name(id) == lower) return id;
  return std::nullopt;
}

namespace {

struct FeatureSpec {
  std::string name;
  Direction direction;
};

constexpr auto kLower = Direction::kLowerIsBetter;
constexpr auto kHigher = Direction::kHigherIsBetter;

std::vector<FeatureSpec> dellacherie_specs() {
  return {{"holes", kLower},
          {"landing_height", kLower},
          {"row_transitions", kLower},
          {"column_transitions", kLower},
          {"cumulative_wells", kLower},
          {"eroded_cells", kHigher}};
}

std::vector<FeatureSpec> feature_specs(FeatureSetId id, int width) {
  switch (id) {
    case FeatureSetId::kBertsekas: {
      std::vector<FeatureSpec> v;
      for (int c = 0; c < width; ++c)
        v.push_back({"column_height_" + std::to_string(c), kLower});
      for (int c = 0; c + 1 < width; ++c)
        v.push_back({"height_diff_" + std::to_string(c), kLower});
      v.push_back({"holes", kLower});
      v.push_back({"pile_height", kLower});
      return v;
    }
    case FeatureSetId::kLagoudakis:
      return {{"holes", kLower},
              {"pile_height", kLower},
              {"sum_abs_height_diffs", kLower},
              {"mean_height", kLower},
              {"delta_holes", kLower},
              {"delta_pile_height", kLower},
              {"delta_sum_abs_height_diffs", kLower},
              {"delta_mean_height", kLower},
              {"cleared_lines", kHigher}};
    case FeatureSetId::kDellacherie:
      return dellacherie_specs();
    case FeatureSetId::kBohm:
      return {{"pile_height", kLower},
              {"connected_holes", kLower},
              {"cleared_lines", kHigher},
              {"max_minus_min_height", kLower},
              {"max_well_depth", kLower},
              {"sum_well_depths", kLower},
              {"landing_height", kLower},
              {"occupied_cells", kLower},
              {"weighted_occupied_cells", kLower},
              {"row_transitions", kLower},
              {"column_transitions", kLower}};
    case FeatureSetId::kBcts:
    case FeatureSetId::kDt: {
      auto v = dellacherie_specs();
      v.push_back({"hole_depth", kLower});
      v.push_back({"rows_with_holes", kLower});
      if (id == FeatureSetId::kDt) v.push_back({"pattern_diversity", kLower});
      return v;
    }
    case FeatureSetId::kRbf: {
      std::vector<FeatureSpec> v;
      for (int i = 0; i < 5; ++i)
        v.push_back({"rbf_" + std::to_string(i), i == 0 ? kHigher : kLower});
      return v;
    }
  }
  throw std::invalid_argument("unknown feature set");
}

}  // namespace

int feature_dimension(FeatureSetId id, int width) {
  switch (id) {
    case FeatureSetId::kBertsekas: return 2 * width + 1;
    case FeatureSetId::kLagoudakis: return 9;
    case FeatureSetId::kDellacherie: return 6;
    case FeatureSetId::kBohm: return 11;
    case FeatureSetId::kBcts: return 8;
    case FeatureSetId::kDt: return 9;
    case FeatureSetId::kRbf: return 5;
  }
  throw std::invalid_argument("unknown feature set");
}

std::vector<std::string> feature_names(FeatureSetId id, int width) {
  std::vector<std::string> out;
  for (auto& s : feature_specs(id, width)) out.push_back(std::move(s.name));
  return out;
}

std::vector<Direction> feature_orientation(FeatureSetId id, int width) {
  std::vector<Direction> out;
  for (const auto& s : feature_specs(id, width)) out.push_back(s.direction);
  return out;
}

int extract_into(FeatureSetId set, const FeatureContext& ctx,
                 std::span<double> out) {
  const Board& post = ctx.outcome.post;
  const int dim = feature_dimension(set, post.width());
  if (static_cast<int>(out.size()) < dim)
    throw std::invalid_argument("feature buffer too small");
  int i = 0;
  auto put = [&](double v) { out[i++] = v; };

  switch (set) {
    case FeatureSetId::kBertsekas:
      for (int c = 0; c < post.width(); ++c) put(post.column_height(c));
      for (int c = 0; c + 1 < post.width(); ++c)
        put(std::abs(post.column_height(c) - post.column_height(c + 1)));
      put(holes(post));
      put(post.pile_height());
      break;
    case FeatureSetId::kLagoudakis: {
      const DeltaFeatures d = delta_features(ctx.pre, post);
      put(holes(post));
      put(post.pile_height());
      put(sum_abs_diffs(post));
      put(mean_height(post));
      put(d.holes);
      put(d.pile_height);
      put(d.sum_abs_height_diffs);
      put(d.mean_height);
      put(ctx.outcome.lines_cleared);
      break;
    }
    case FeatureSetId::kDellacherie:
    case FeatureSetId::kBcts:
    case FeatureSetId::kDt: {
      const bool extended = set != FeatureSetId::kDellacherie;
      HoleStats hs;
      if (extended)
        hs = hole_stats(post);
      else
        hs.holes = holes(post);
      put(hs.holes);
      put(ctx.outcome.landing_height);
      put(row_transitions(post));
      put(column_transitions(post));
      put(well_stats(post).cumulative);
      put(ctx.outcome.eroded_cells);
      if (extended) {
        put(hs.depth);
        put(hs.rows_with_holes);
      }
      if (set == FeatureSetId::kDt) put(pattern_diversity(post));
      break;
    }
    case FeatureSetId::kBohm: {
      const WellStats ws = well_stats(post);
      put(post.pile_height());
      put(hole_stats(post).connected);
      put(ctx.outcome.lines_cleared);
      put(post.pile_height() - min_height(post));
      put(ws.max_depth);
      put(ws.sum_depths);
      put(ctx.outcome.landing_height);
      put(post.cell_count());
      put(weighted_cells(post));
      put(row_transitions(post));
      put(column_transitions(post));
      break;
    }
    case FeatureSetId::kRbf:
      for (double v : height_rbf(post)) put(v);
      break;
  }
  return i;
}

FeatureVector extract(FeatureSetId set, const FeatureContext& ctx) {
  FeatureVector fv{set, std::vector<double>(
                            feature_dimension(set, ctx.outcome.post.width()))};
  extract_into(set, ctx, fv.values);
  return fv;
}

MoveOutcome null_outcome(const Board& board) {
  return MoveOutcome{board, 0, 0.0, 0, false};
}

}  // namespace tetrisw
