#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tetrisw {

inline constexpr int kMaxWidth = 30;
inline constexpr int kMaxHeight = 64;
inline constexpr int kNumPieces = 7;

enum class GameOverVariant { kOverflow, kSpawnBlocked };

// kAlternatingSz replaces the random stream with S, Z, S, Z, ... and exists
// for the forced-termination experiment.
enum class PieceRule { kUniformIid, kAlternatingSz };

struct GameConfig {
  int width = 10;
  int height = 20;
  // Reward for clearing 1, 2, 3, 4 lines with a single placement.
  std::array<double, 4> scoring{1.0, 2.0, 3.0, 4.0};
  GameOverVariant game_over = GameOverVariant::kOverflow;
  PieceRule piece_rule = PieceRule::kUniformIid;

  // Throws std::invalid_argument on out-of-range dimensions or scores.
  void validate() const;
  double reward_for(int lines_cleared) const;
};

std::string_view game_over_name(GameOverVariant v);
std::optional<GameOverVariant> game_over_from_name(std::string_view name);

enum class PieceKind : std::uint8_t { I, O, T, S, Z, J, L };

inline constexpr std::array<PieceKind, kNumPieces> kAllPieces{
    PieceKind::I, PieceKind::O, PieceKind::T, PieceKind::S,
    PieceKind::Z, PieceKind::J, PieceKind::L};

char piece_char(PieceKind p);
std::optional<PieceKind> piece_from_char(char c);

struct Cell {
  int dx;
  int dy;
};

// One fixed orientation of a piece. Offsets are normalized so that the
// minimum dx and dy are both zero; dy grows upwards.
struct Rotation {
  std::array<Cell, 4> cells;
  int width;
  int height;
  std::array<int, 4> bottom;         // lowest dy occupied in column dx
  std::array<int, 4> top;            // highest dy occupied in column dx
  std::array<std::uint32_t, 4> rows; // occupancy of row dy, anchored at column 0
};

std::span<const Rotation> rotations(PieceKind p);

// Occupancy grid. Bit c of row r is column c; row 0 is the floor. Column
// heights are cached and no row is ever full.
class Board {
 public:
  Board(int width, int height);

  // Validates dimensions and the no-full-row invariant.
  static Board from_rows(int width, int height,
                         std::span<const std::uint32_t> rows);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint32_t row(int r) const { return rows_[r]; }
  bool filled(int column, int row) const {
    return (rows_[row] >> column) & 1u;
  }
  int column_height(int column) const { return heights_[column]; }
  int pile_height() const { return pile_; }
  std::uint32_t full_mask() const { return (1u << width_) - 1u; }
  int cell_count() const;

  friend bool operator==(const Board& a, const Board& b);

 private:
  friend struct BoardMutator;
  void recompute_heights();

  int width_;
  int height_;
  int pile_ = 0;
  std::array<std::uint32_t, kMaxHeight> rows_{};
  std::array<std::uint8_t, kMaxWidth> heights_{};
};

struct Placement {
  PieceKind piece;
  int rotation;
  int column;

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct MoveOutcome {
  Board post;
  int lines_cleared = 0;
  // Vertical center of the piece before clearing, (bottom + top) / 2.
  double landing_height = 0.0;
  // lines_cleared times the piece cells that were inside the cleared lines.
  int eroded_cells = 0;
  bool terminal = false;
};

// Every horizontally fitting (rotation, column) pair, ordered by rotation then
// column. Placements that would overflow the top are included.
std::vector<Placement> legal_placements(const Board& board, PieceKind piece);

// Visits the same sequence as legal_placements without allocating.
template <typename Fn>
void for_each_placement(const Board& board, PieceKind piece, Fn&& fn) {
  const auto rots = rotations(piece);
  for (int r = 0; r < static_cast<int>(rots.size()); ++r)
    for (int c = 0; c + rots[r].width <= board.width(); ++c)
      fn(Placement{piece, r, c});
}

// Throws std::invalid_argument when the placement does not fit horizontally.
MoveOutcome drop(const Board& board, const Placement& placement);

// True when the spawn footprint of `piece` (rotation 0, centered, flush with
// the top row) overlaps an occupied cell.
bool spawn_blocked(const Board& board, PieceKind piece);

// ASCII rows from {'X', '.'}, top row first, one line per row. A width or
// height of 0 is inferred from the text.
Board parse_board(std::string_view text, int width = 0, int height = 0);
std::string render_board(const Board& board);

// Deterministic 64-bit mixer used to expand master seeds into streams.
std::uint64_t splitmix64(std::uint64_t& state);
std::vector<std::uint64_t> expand_seeds(std::uint64_t master, std::size_t n);

class Episode {
 public:
  Episode(const GameConfig& config, std::uint64_t seed);

  const GameConfig& config() const { return config_; }
  const Board& board() const { return board_; }
  PieceKind current_piece() const { return current_; }
  // The piece that will follow the current one.
  PieceKind next_piece() const { return next_; }
  double score() const { return score_; }
  std::int64_t pieces_placed() const { return pieces_; }
  std::int64_t lines_cleared() const { return lines_; }
  bool finished() const { return finished_; }

  // Applies `placement` for the current piece and returns the reward. A
  // terminal move finishes the episode with reward 0. Throws
  // std::logic_error on a finished episode and std::invalid_argument when the
  // placement is for a different piece.
  double step(const Placement& placement);

 private:
  PieceKind draw();

  GameConfig config_;
  Board board_;
  std::mt19937_64 rng_;
  std::uint64_t sequence_index_ = 0;
  PieceKind current_;
  PieceKind next_;
  double score_ = 0.0;
  std::int64_t pieces_ = 0;
  std::int64_t lines_ = 0;
  bool finished_ = false;
};

}  // namespace tetrisw
