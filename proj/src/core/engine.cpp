#include "engine.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace tetrisw {

namespace {

using Shape = std::array<Cell, 4>;

Rotation make_rotation(const Shape& shape) {
  Rotation r{};
  r.cells = shape;
  r.width = 0;
  r.height = 0;
  for (const Cell& c : shape) {
    r.width = std::max(r.width, c.dx + 1);
    r.height = std::max(r.height, c.dy + 1);
  }
  r.bottom.fill(kMaxHeight);
  r.top.fill(-1);
  r.rows.fill(0);
  for (const Cell& c : shape) {
    r.bottom[c.dx] = std::min(r.bottom[c.dx], c.dy);
    r.top[c.dx] = std::max(r.top[c.dx], c.dy);
    r.rows[c.dy] |= 1u << c.dx;
  }
  return r;
}

struct RotationTable {
  std::array<std::vector<Rotation>, kNumPieces> by_piece;

  RotationTable() {
    auto add = [this](PieceKind p, std::initializer_list<Shape> shapes) {
      for (const Shape& s : shapes)
        by_piece[static_cast<int>(p)].push_back(make_rotation(s));
    };
    add(PieceKind::I, {Shape{{{0, 0}, {1, 0}, {2, 0}, {3, 0}}},
                       Shape{{{0, 0}, {0, 1}, {0, 2}, {0, 3}}}});
    add(PieceKind::O, {Shape{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}}});
    add(PieceKind::T, {Shape{{{0, 0}, {1, 0}, {2, 0}, {1, 1}}},
                       Shape{{{0, 0}, {0, 1}, {0, 2}, {1, 1}}},
                       Shape{{{1, 0}, {0, 1}, {1, 1}, {2, 1}}},
                       Shape{{{1, 0}, {1, 1}, {1, 2}, {0, 1}}}});
    add(PieceKind::S, {Shape{{{0, 0}, {1, 0}, {1, 1}, {2, 1}}},
                       Shape{{{1, 0}, {1, 1}, {0, 1}, {0, 2}}}});
    add(PieceKind::Z, {Shape{{{1, 0}, {2, 0}, {0, 1}, {1, 1}}},
                       Shape{{{0, 0}, {0, 1}, {1, 1}, {1, 2}}}});
    add(PieceKind::J, {Shape{{{0, 0}, {1, 0}, {2, 0}, {0, 1}}},
                       Shape{{{0, 0}, {0, 1}, {0, 2}, {1, 2}}},
                       Shape{{{0, 1}, {1, 1}, {2, 1}, {2, 0}}},
                       Shape{{{0, 0}, {1, 0}, {1, 1}, {1, 2}}}});
    add(PieceKind::L, {Shape{{{0, 0}, {1, 0}, {2, 0}, {2, 1}}},
                       Shape{{{0, 0}, {1, 0}, {0, 1}, {0, 2}}},
                       Shape{{{0, 0}, {0, 1}, {1, 1}, {2, 1}}},
                       Shape{{{1, 0}, {1, 1}, {1, 2}, {0, 2}}}});
  }
};

const RotationTable& rotation_table() {
  static const RotationTable table;
  return table;
}

}  // namespace

struct BoardMutator {
  static std::array<std::uint32_t, kMaxHeight>& rows(Board& b) {
    return b.rows_;
  }
  static void set_column_height(Board& b, int c, int h) {
    b.heights_[c] = static_cast<std::uint8_t>(h);
    b.pile_ = std::max(b.pile_, h);
  }
  static void recompute(Board& b) { b.recompute_heights(); }
};

void GameConfig::validate() const {
  if (width < 4 || width > kMaxWidth)
    throw std::invalid_argument("width must be in [4, " +
                                std::to_string(kMaxWidth) + "]");
  if (height < 4 || height > kMaxHeight)
    throw std::invalid_argument("height must be in [4, " +
                                std::to_string(kMaxHeight) + "]");
  for (double s : scoring)
    if (!(s >= 0.0)) throw std::invalid_argument("scores must be >= 0");
}

double GameConfig::reward_for(int lines_cleared) const {
  return lines_cleared <= 0 ? 0.0 : scoring[lines_cleared - 1];
}

std::string_view game_over_name(GameOverVariant v) {
  return v == GameOverVariant::kOverflow ? "overflow" : "spawn-blocked";
}

std::optional<GameOverVariant> game_over_from_name(std::string_view name) {
  if (name == "overflow") return GameOverVariant::kOverflow;
  if (name == "spawn-blocked") return GameOverVariant::kSpawnBlocked;
  return std::nullopt;
}

char piece_char(PieceKind p) { return "IOTSZJL"[static_cast<int>(p)]; }

std::optional<PieceKind> piece_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return PieceKind::I;
    case 'O': case 'o': return PieceKind::O;
    case 'T': case 't': return PieceKind::T;
    case 'S': case 's': return PieceKind::S;
    case 'Z': case 'z': return PieceKind::Z;
    case 'J': case 'j': return PieceKind::J;
    case 'L': case 'l': return PieceKind::L;
    default: return std::nullopt;
  }
}

std::span<const Rotation> rotations(PieceKind p) {
  return rotation_table().by_piece[static_cast<int>(p)];
}

Board::Board(int width, int height) : width_(width), height_(height) {
  if (width < 4 || width > kMaxWidth || height < 4 || height > kMaxHeight)
    throw std::invalid_argument("board dimensions out of range");
}

Board Board::from_rows(int width, int height,
                       std::span<const std::uint32_t> rows) {
  Board b(width, height);
  if (rows.size() != static_cast<std::size_t>(height))
    throw std::invalid_argument("row count does not match board height");
  for (int r = 0; r < height; ++r) {
    if (rows[r] & ~b.full_mask())
      throw std::invalid_argument("row has cells outside the board");
    if (rows[r] == b.full_mask())
      throw std::invalid_argument("row " + std::to_string(r) + " is full");
    b.rows_[r] = rows[r];
  }
  b.recompute_heights();
  return b;
}

int Board::cell_count() const {
  int n = 0;
  for (int r = 0; r < pile_; ++r) n += std::popcount(rows_[r]);
  return n;
}

void Board::recompute_heights() {
  heights_.fill(0);
  pile_ = 0;
  std::uint32_t seen = 0;
  for (int r = height_ - 1; r >= 0 && seen != full_mask(); --r) {
    std::uint32_t fresh = rows_[r] & ~seen;
    if (fresh && pile_ == 0) pile_ = r + 1;
    while (fresh) {
      heights_[std::countr_zero(fresh)] = static_cast<std::uint8_t>(r + 1);
      fresh &= fresh - 1;
    }
    seen |= rows_[r];
  }
}

bool operator==(const Board& a, const Board& b) {
  if (a.width_ != b.width_ || a.height_ != b.height_) return false;
  return std::equal(a.rows_.begin(), a.rows_.begin() + a.height_,
                    b.rows_.begin());
}

std::vector<Placement> legal_placements(const Board& board, PieceKind piece) {
  std::vector<Placement> out;
  const auto rots = rotations(piece);
  for (int r = 0; r < static_cast<int>(rots.size()); ++r)
    for (int c = 0; c + rots[r].width <= board.width(); ++c)
      out.push_back({piece, r, c});
  return out;
}

MoveOutcome drop(const Board& board, const Placement& placement) {
  const auto rots = rotations(placement.piece);
  if (placement.rotation < 0 ||
      placement.rotation >= static_cast<int>(rots.size()))
    throw std::invalid_argument("rotation index out of range");
  const Rotation& rot = rots[placement.rotation];
  const int col = placement.column;
  if (col < 0 || col + rot.width > board.width())
    throw std::invalid_argument("placement does not fit horizontally");

  int base = 0;
  for (int dx = 0; dx < rot.width; ++dx)
    base = std::max(base, board.column_height(col + dx) - rot.bottom[dx]);

  MoveOutcome out{board};
  out.landing_height = base + (rot.height - 1) / 2.0;
  if (base + rot.height > board.height()) {
    out.terminal = true;
    return out;
  }

  auto& rows = BoardMutator::rows(out.post);
  const std::uint32_t full = board.full_mask();
  int piece_cells_in_full_rows = 0;
  for (int dy = 0; dy < rot.height; ++dy) {
    rows[base + dy] |= rot.rows[dy] << col;
    if (rows[base + dy] == full) {
      ++out.lines_cleared;
      piece_cells_in_full_rows += std::popcount(rot.rows[dy]);
    }
  }

  if (out.lines_cleared == 0) {
    for (int dx = 0; dx < rot.width; ++dx)
      BoardMutator::set_column_height(out.post, col + dx,
                                      base + rot.top[dx] + 1);
    return out;
  }

  out.eroded_cells = out.lines_cleared * piece_cells_in_full_rows;
  const int used = std::max(board.pile_height(), base + rot.height);
  int write = base;
  for (int r = base; r < used; ++r)
    if (rows[r] != full) rows[write++] = rows[r];
  for (int r = write; r < used; ++r) rows[r] = 0;
  BoardMutator::recompute(out.post);
  return out;
}

bool spawn_blocked(const Board& board, PieceKind piece) {
  const Rotation& rot = rotations(piece)[0];
  const int col = (board.width() - rot.width) / 2;
  const int base = board.height() - rot.height;
  for (int dy = 0; dy < rot.height; ++dy)
    if (board.row(base + dy) & (rot.rows[dy] << col)) return true;
  return false;
}

Board parse_board(std::string_view text, int width, int height) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty()) throw std::invalid_argument("board text is empty");
  if (height == 0) height = static_cast<int>(lines.size());
  if (width == 0) width = static_cast<int>(lines.front().size());
  if (static_cast<int>(lines.size()) != height)
    throw std::invalid_argument("expected " + std::to_string(height) +
                                " rows, got " + std::to_string(lines.size()));
  if (width < 4 || width > kMaxWidth || height < 4 || height > kMaxHeight)
    throw std::invalid_argument("board dimensions out of range");

  std::vector<std::uint32_t> rows(height, 0);
  for (int i = 0; i < height; ++i) {
    const auto line = lines[i];
    if (static_cast<int>(line.size()) != width)
      throw std::invalid_argument("line " + std::to_string(i + 1) + " has " +
                                  std::to_string(line.size()) +
                                  " cells, expected " + std::to_string(width));
    std::uint32_t mask = 0;
    for (int c = 0; c < width; ++c) {
      if (line[c] == 'X')
        mask |= 1u << c;
      else if (line[c] != '.')
        throw std::invalid_argument("illegal character '" +
                                    std::string(1, line[c]) + "' on line " +
                                    std::to_string(i + 1));
    }
    rows[height - 1 - i] = mask;
  }
  return Board::from_rows(width, height, rows);
}

std::string render_board(const Board& board) {
  std::string out;
  out.reserve(static_cast<std::size_t>((board.width() + 1) * board.height()));
  for (int r = board.height() - 1; r >= 0; --r) {
    for (int c = 0; c < board.width(); ++c)
      out.push_back(board.filled(c, r) ? 'X' : '.');
    out.push_back('\n');
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> expand_seeds(std::uint64_t master, std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  for (auto& s : seeds) s = splitmix64(master);
  return seeds;
}

Episode::Episode(const GameConfig& config, std::uint64_t seed)
    : config_(config),
      board_(config.width, config.height),
      rng_(seed),
      current_(PieceKind::I),
      next_(PieceKind::I) {
  config_.validate();
  current_ = draw();
  next_ = draw();
}

PieceKind Episode::draw() {
  if (config_.piece_rule == PieceRule::kAlternatingSz)
    return (sequence_index_++ % 2 == 0) ? PieceKind::S : PieceKind::Z;
  ++sequence_index_;
  // Multiply-shift keeps the draw portable across standard libraries.
  const std::uint64_t hi = rng_() >> 32;
  return kAllPieces[(hi * kNumPieces) >> 32];
}

double Episode::step(const Placement& placement) {
  if (finished_) throw std::logic_error("episode is finished");
  if (placement.piece != current_)
    throw std::invalid_argument("placement is not for the current piece");
  MoveOutcome outcome = drop(board_, placement);
  if (outcome.terminal) {
    finished_ = true;
    return 0.0;
  }
  board_ = outcome.post;
  ++pieces_;
  lines_ += outcome.lines_cleared;
  const double reward = config_.reward_for(outcome.lines_cleared);
  score_ += reward;
  current_ = next_;
  next_ = draw();
  if (config_.game_over == GameOverVariant::kSpawnBlocked &&
      spawn_blocked(board_, current_))
    finished_ = true;
  return reward;
}

}  // namespace tetrisw
