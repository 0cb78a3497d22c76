// Test support: a naive reference implementation of the board, drop and
// feature rules, plus hand-rolled random generators. Nothing here uses the
// engine's rotation tables, cached heights or bit tricks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "features.hpp"

namespace oracle {

struct Grid {
  int w = 0;
  int h = 0;
  std::vector<std::vector<int>> cells;  // cells[row][col], row 0 = floor

  Grid(int width, int height)
      : w(width), h(height), cells(height, std::vector<int>(width, 0)) {}

  bool full(int r, int c) const {
    if (c < 0 || c >= w) return true;  // walls
    if (r < 0) return true;            // floor
    if (r >= h) return false;          // open sky
    return cells[r][c] != 0;
  }
};

inline Grid from_board(const tetrisw::Board& b) {
  Grid g(b.width(), b.height());
  for (int r = 0; r < b.height(); ++r)
    for (int c = 0; c < b.width(); ++c) g.cells[r][c] = (b.row(r) >> c) & 1u;
  return g;
}

inline tetrisw::Board to_board(const Grid& g) {
  std::vector<std::uint32_t> rows(g.h, 0);
  for (int r = 0; r < g.h; ++r)
    for (int c = 0; c < g.w; ++c)
      if (g.cells[r][c]) rows[r] |= 1u << c;
  return tetrisw::Board::from_rows(g.w, g.h, rows);
}

// ---- pieces ------------------------------------------------------------------

using Shape = std::vector<std::pair<int, int>>;  // (dx, dy), sorted

inline Shape normalize(Shape s) {
  int mx = 1 << 20, my = 1 << 20;
  for (auto [x, y] : s) mx = std::min(mx, x), my = std::min(my, y);
  for (auto& [x, y] : s) x -= mx, y -= my;
  std::sort(s.begin(), s.end());
  return s;
}

// Every distinct orientation of the piece drawn in `art` (top line first),
// found by rotating the drawing four times.
inline std::vector<Shape> orientations_from_art(const std::vector<std::string>& art) {
  Shape s;
  for (int line = 0; line < static_cast<int>(art.size()); ++line)
    for (int x = 0; x < static_cast<int>(art[line].size()); ++x)
      if (art[line][x] == 'X') s.push_back({x, static_cast<int>(art.size()) - 1 - line});
  std::set<Shape> seen;
  std::vector<Shape> out;
  for (int k = 0; k < 4; ++k) {
    Shape n = normalize(s);
    if (seen.insert(n).second) out.push_back(n);
    for (auto& [x, y] : s) std::tie(x, y) = std::make_pair(y, -x);
  }
  return out;
}

inline std::vector<Shape> orientations(tetrisw::PieceKind p) {
  switch (p) {
    case tetrisw::PieceKind::I: return orientations_from_art({"XXXX"});
    case tetrisw::PieceKind::O: return orientations_from_art({"XX", "XX"});
    case tetrisw::PieceKind::T: return orientations_from_art({"XXX", ".X."});
    case tetrisw::PieceKind::S: return orientations_from_art({".XX", "XX."});
    case tetrisw::PieceKind::Z: return orientations_from_art({"XX.", ".XX"});
    case tetrisw::PieceKind::J: return orientations_from_art({"X..", "XXX"});
    case tetrisw::PieceKind::L: return orientations_from_art({"..X", "XXX"});
  }
  return {};
}

inline int shape_width(const Shape& s) {
  int m = 0;
  for (auto [x, y] : s) m = std::max(m, x + 1);
  return m;
}

// Rotations x columns that fit horizontally.
inline int placement_count(int width, tetrisw::PieceKind p) {
  int n = 0;
  for (const Shape& s : orientations(p))
    for (int c = 0; c + shape_width(s) <= width; ++c) ++n;
  return n;
}

struct Drop {
  Grid post;
  int lines = 0;
  double landing = 0.0;
  int eroded = 0;
  bool terminal = false;
};

// Lowers the shape one row at a time from above the grid.
inline Drop drop(const Grid& g, const Shape& s, int column) {
  auto fits = [&](int y) {
    for (auto [dx, dy] : s)
      if (y + dy < 0 || (y + dy < g.h && g.cells[y + dy][column + dx])) return false;
    return true;
  };
  int y = g.h;
  while (fits(y - 1)) --y;
  Drop d{g};
  int lo = 1 << 20, hi = -1;
  for (auto [dx, dy] : s) {
    lo = std::min(lo, y + dy);
    hi = std::max(hi, y + dy);
    if (y + dy >= g.h) d.terminal = true;
  }
  if (d.terminal) return d;
  for (auto [dx, dy] : s) d.post.cells[y + dy][column + dx] = 1;
  d.landing = (lo + hi) / 2.0;
  std::vector<std::vector<int>> kept;
  int piece_cells_cleared = 0;
  for (int r = 0; r < g.h; ++r) {
    int n = 0;
    for (int c = 0; c < g.w; ++c) n += d.post.cells[r][c];
    if (n == g.w) {
      ++d.lines;
      for (auto [dx, dy] : s) piece_cells_cleared += (y + dy == r);
    } else {
      kept.push_back(d.post.cells[r]);
    }
  }
  while (static_cast<int>(kept.size()) < g.h) kept.push_back(std::vector<int>(g.w, 0));
  d.post.cells = kept;
  d.eroded = d.lines * piece_cells_cleared;
  return d;
}

// ---- features ----------------------------------------------------------------

struct Features {
  std::vector<int> heights;
  int holes = 0;
  int connected_holes = 0;
  int hole_depth = 0;
  int rows_with_holes = 0;
  int row_transitions = 0;
  int column_transitions = 0;
  int cumulative_wells = 0;
  int max_well_depth = 0;
  int sum_well_depths = 0;
  int pattern_diversity = 0;
  int occupied = 0;
  int weighted_occupied = 0;
  int pile = 0;
  int min_height = 0;
  int sum_abs_diffs = 0;
  double mean_height = 0.0;
  std::vector<double> rbf;
};

inline Features features(const Grid& g) {
  Features f;
  f.heights.assign(g.w, 0);
  for (int c = 0; c < g.w; ++c)
    for (int r = 0; r < g.h; ++r)
      if (g.cells[r][c]) f.heights[c] = r + 1;

  for (int c = 0; c < g.w; ++c) {
    bool prev_hole = false;
    for (int r = g.h - 1; r >= 0; --r) {
      int above = 0;
      for (int k = r + 1; k < g.h; ++k) above += g.cells[k][c];
      const bool hole = !g.cells[r][c] && above > 0;
      if (hole) {
        ++f.holes;
        f.hole_depth += above;
        if (!prev_hole) ++f.connected_holes;
      }
      prev_hole = hole;
    }
  }
  for (int r = 0; r < g.h; ++r) {
    bool any = false;
    for (int c = 0; c < g.w; ++c) {
      bool covered = false;
      for (int k = r + 1; k < g.h; ++k) covered = covered || g.cells[k][c];
      any = any || (!g.cells[r][c] && covered);
    }
    f.rows_with_holes += any;
  }

  for (int r = 0; r < g.h; ++r)
    for (int c = -1; c < g.w; ++c) f.row_transitions += g.full(r, c) != g.full(r, c + 1);
  for (int c = 0; c < g.w; ++c)
    for (int r = -1; r < g.h; ++r)
      f.column_transitions += g.full(r, c) != g.full(r + 1, c);

  for (int c = 0; c < g.w; ++c) {
    int run = 0;
    auto close = [&] {
      if (run > 0) {
        f.cumulative_wells += run * (run + 1) / 2;
        f.max_well_depth = std::max(f.max_well_depth, run);
        f.sum_well_depths += run;
      }
      run = 0;
    };
    for (int r = g.h - 1; r >= 0; --r) {
      bool open_above = true;
      for (int k = r + 1; k < g.h; ++k) open_above = open_above && !g.cells[k][c];
      const bool well = !g.cells[r][c] && open_above && g.full(r, c - 1) && g.full(r, c + 1);
      if (well)
        ++run;
      else
        close();
    }
    close();
  }

  std::set<int> diffs;
  for (int c = 0; c + 1 < g.w; ++c) {
    const int d = f.heights[c] - f.heights[c + 1];
    if (std::abs(d) <= 2) diffs.insert(d);
    f.sum_abs_diffs += std::abs(d);
  }
  f.pattern_diversity = static_cast<int>(diffs.size());

  for (int r = 0; r < g.h; ++r)
    for (int c = 0; c < g.w; ++c)
      if (g.cells[r][c]) {
        ++f.occupied;
        f.weighted_occupied += r + 1;
      }

  f.pile = *std::max_element(f.heights.begin(), f.heights.end());
  f.min_height = *std::min_element(f.heights.begin(), f.heights.end());
  double sum = 0;
  for (int x : f.heights) sum += x;
  f.mean_height = sum / g.w;
  for (int i = 0; i < 5; ++i) {
    const double center = i * g.h / 4.0;
    const double sigma = g.h / 5.0;
    f.rbf.push_back(std::exp(-(f.mean_height - center) * (f.mean_height - center) /
                             (2 * sigma * sigma)));
  }
  return f;
}

// Named feature vector assembled from the reference primitives, in the
// documented order of each set.
inline std::vector<double> feature_vector(tetrisw::FeatureSetId set, const Grid& pre,
                                          const Drop& d) {
  const Features a = features(d.post);
  const double landing = d.landing, eroded = d.eroded, lines = d.lines;
  using tetrisw::FeatureSetId;
  std::vector<double> v;
  switch (set) {
    case FeatureSetId::kBertsekas:
      for (int x : a.heights) v.push_back(x);
      for (int c = 0; c + 1 < pre.w; ++c) v.push_back(std::abs(a.heights[c] - a.heights[c + 1]));
      v.push_back(a.holes);
      v.push_back(a.pile);
      break;
    case FeatureSetId::kLagoudakis: {
      const Features b = features(pre);
      v = {double(a.holes), double(a.pile), double(a.sum_abs_diffs), a.mean_height,
           double(a.holes - b.holes), double(a.pile - b.pile),
           double(a.sum_abs_diffs - b.sum_abs_diffs), a.mean_height - b.mean_height, lines};
      break;
    }
    case FeatureSetId::kDellacherie:
    case FeatureSetId::kBcts:
    case FeatureSetId::kDt:
      v = {double(a.holes), landing, double(a.row_transitions),
           double(a.column_transitions), double(a.cumulative_wells), eroded};
      if (set != FeatureSetId::kDellacherie) {
        v.push_back(a.hole_depth);
        v.push_back(a.rows_with_holes);
      }
      if (set == FeatureSetId::kDt) v.push_back(a.pattern_diversity);
      break;
    case FeatureSetId::kBohm:
      v = {double(a.pile), double(a.connected_holes), lines, double(a.pile - a.min_height),
           double(a.max_well_depth), double(a.sum_well_depths), landing,
           double(a.occupied), double(a.weighted_occupied), double(a.row_transitions),
           double(a.column_transitions)};
      break;
    case FeatureSetId::kRbf:
      v = a.rbf;
      break;
  }
  return v;
}

}  // namespace oracle

namespace gen {

// Random board with no full rows. Mixes several shapes so that holes, wells,
// overhangs and near-top stacks all show up.
inline oracle::Grid random_grid(std::mt19937_64& rng, int width, int height) {
  oracle::Grid g(width, height);
  std::uniform_int_distribution<int> style_d(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int style = style_d(rng);
  if (style == 0) {  // uniform noise up to a random ceiling
    const int top = std::uniform_int_distribution<int>(0, height)(rng);
    const double p = u(rng);
    for (int r = 0; r < top; ++r)
      for (int c = 0; c < width; ++c) g.cells[r][c] = u(rng) < p;
  } else {  // stacked columns with occasional holes
    const double hole_p = style == 1 ? 0.0 : u(rng) * 0.4;
    const int max_h = std::uniform_int_distribution<int>(0, height)(rng);
    int walk = std::uniform_int_distribution<int>(0, max_h)(rng);
    for (int c = 0; c < width; ++c) {
      int hgt;
      if (style == 3) {  // random walk surface, likes wells and cliffs
        walk += std::uniform_int_distribution<int>(-3, 3)(rng);
        walk = std::clamp(walk, 0, max_h);
        hgt = walk;
      } else {
        hgt = std::uniform_int_distribution<int>(0, max_h)(rng);
      }
      for (int r = 0; r < hgt; ++r) g.cells[r][c] = (r == hgt - 1) || u(rng) >= hole_p;
    }
  }
  for (int r = 0; r < height; ++r) {
    bool full = true;
    for (int c = 0; c < width; ++c) full = full && g.cells[r][c];
    if (full) g.cells[r][std::uniform_int_distribution<int>(0, width - 1)(rng)] = 0;
  }
  return g;
}

inline tetrisw::PieceKind random_piece(std::mt19937_64& rng) {
  return tetrisw::kAllPieces[std::uniform_int_distribution<int>(0, 6)(rng)];
}

// Board reached by playing random legal moves from empty, so it looks like a
// real (if poor) game position.
inline tetrisw::Board random_midgame(std::mt19937_64& rng, int width, int height, int moves) {
  tetrisw::Board b(width, height);
  for (int i = 0; i < moves; ++i) {
    const auto ps = tetrisw::legal_placements(b, random_piece(rng));
    const auto& p = ps[std::uniform_int_distribution<std::size_t>(0, ps.size() - 1)(rng)];
    auto o = tetrisw::drop(b, p);
    if (o.terminal) break;
    b = o.post;
  }
  return b;
}

}  // namespace gen
