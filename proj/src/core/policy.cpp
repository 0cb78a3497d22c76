#include "policy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tetrisw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dot(std::span<const double> w, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f[i];
  return s;
}

void check_dimension(const LinearPolicy& policy, int width) {
  if (static_cast<int>(policy.weights.size()) !=
      feature_dimension(policy.set, width))
    throw std::invalid_argument(
        "policy '" + policy.name + "' has " +
        std::to_string(policy.weights.size()) + " weights, feature set " +
        std::string(feature_set_name(policy.set)) + " needs " +
        std::to_string(feature_dimension(policy.set, width)));
}

// Fast evaluation without the dimension check; callers validate once.
double score_outcome(const LinearPolicy& policy, const Board& pre,
                     const MoveOutcome& outcome) {
  std::array<double, kMaxFeatureDimension> buf;
  const int n = extract_into(policy.set, {pre, outcome}, buf);
  return dot(policy.weights, std::span<const double>(buf.data(), n));
}

}  // namespace

void LinearPolicy::validate(int width) const {
  check_dimension(*this, width);
  for (double w : weights)
    if (!std::isfinite(w))
      throw std::invalid_argument("policy '" + name + "' has a non-finite weight");
}

LinearPolicy dellacherie_policy() {
  return {"dellacherie", FeatureSetId::kDellacherie,
          {-4.0, -1.0, -1.0, -1.0, -1.0, 1.0}};
}

std::optional<LinearPolicy> builtin_policy(std::string_view name) {
  if (name == "dellacherie") return dellacherie_policy();
  return std::nullopt;
}

double evaluate(const LinearPolicy& policy, const FeatureContext& ctx) {
  check_dimension(policy, ctx.outcome.post.width());
  return score_outcome(policy, ctx.pre, ctx.outcome);
}

double evaluate(const LinearPolicy& policy, const FeatureVector& features) {
  if (features.set != policy.set)
    throw std::invalid_argument("feature set does not match policy");
  if (features.values.size() != policy.weights.size())
    throw std::invalid_argument("feature vector dimension mismatch");
  return dot(policy.weights, features.values);
}

Decision select_action(const LinearPolicy& policy, const Board& board,
                       PieceKind piece) {
  check_dimension(policy, board.width());
  Decision best{{piece, 0, 0}, 0, kNegInf};
  int index = 0;
  for_each_placement(board, piece, [&](const Placement& p) {
    const MoveOutcome o = drop(board, p);
    const double s = o.terminal ? kNegInf : score_outcome(policy, board, o);
    if (s > best.score) best = {p, index, s};
    ++index;
  });
  return best;
}

Decision select_action(const LinearPolicy& policy, const Board& board,
                       PieceKind piece, DecisionTrace& trace) {
  check_dimension(policy, board.width());
  trace = {};
  trace.candidates = legal_placements(board, piece);
  Decision best{trace.candidates.front(), 0, kNegInf};
  for (int i = 0; i < static_cast<int>(trace.candidates.size()); ++i) {
    const MoveOutcome o = drop(board, trace.candidates[i]);
    FeatureVector fv = extract(policy.set, {board, o});
    const double s = o.terminal ? kNegInf : dot(policy.weights, fv.values);
    trace.features.push_back(std::move(fv));
    trace.scores.push_back(s);
    if (s > best.score) best = {trace.candidates[i], i, s};
  }
  trace.chosen = best.index;
  return best;
}

Decision select_action_two_piece(const LinearPolicy& policy, const Board& board,
                                 PieceKind piece, PieceKind next_piece,
                                 LookaheadOptions options) {
  check_dimension(policy, board.width());
  Decision best{{piece, 0, 0}, 0, kNegInf};
  int index = 0;
  for_each_placement(board, piece, [&](const Placement& first) {
    const int i = index++;
    const MoveOutcome o1 = drop(board, first);
    if (o1.terminal) return;
    double value = kNegInf;
    for_each_placement(o1.post, next_piece, [&](const Placement& second) {
      const MoveOutcome o2 = drop(o1.post, second);
      if (!o2.terminal)
        value = std::max(value, score_outcome(policy, o1.post, o2));
    });
    if (options.include_first_level && value != kNegInf)
      value += score_outcome(policy, board, o1);
    if (value > best.score) best = {first, i, value};
  });
  if (best.score == kNegInf) return select_action(policy, board, piece);
  return best;
}

}  // namespace tetrisw
