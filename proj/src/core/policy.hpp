#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"
#include "features.hpp"

namespace tetrisw {

// Linear afterstate evaluator: score = weights . extract(set, ctx).
struct LinearPolicy {
  std::string name;
  FeatureSetId set = FeatureSetId::kDellacherie;
  std::vector<double> weights;

  // Throws std::invalid_argument if the weights are not finite or do not
  // match the set dimension on a board of `width` columns.
  void validate(int width = 10) const;
};

// Holes -4, landing height -1, row transitions -1, column transitions -1,
// cumulative wells -1, eroded cells +1.
LinearPolicy dellacherie_policy();

// Built-in policies addressable by name ("dellacherie").
std::optional<LinearPolicy> builtin_policy(std::string_view name);

double evaluate(const LinearPolicy& policy, const FeatureContext& ctx);
double evaluate(const LinearPolicy& policy, const FeatureVector& features);

struct Decision {
  Placement placement;
  int index = 0;  // position in legal_placements order
  double score = 0.0;
};

struct DecisionTrace {
  std::vector<Placement> candidates;
  std::vector<FeatureVector> features;
  std::vector<double> scores;  // -inf for terminal placements
  int chosen = 0;
};

// Greedy argmax over legal placements. Terminal placements score -inf; ties
// go to the earliest placement in enumeration order.
Decision select_action(const LinearPolicy& policy, const Board& board,
                       PieceKind piece);
Decision select_action(const LinearPolicy& policy, const Board& board,
                       PieceKind piece, DecisionTrace& trace);

struct LookaheadOptions {
  // Add the first afterstate's evaluation to the lookahead value.
  bool include_first_level = false;
};

// Chooses the current placement by the best evaluation reachable with the
// known next piece. Falls back to select_action when every first move is
// terminal or leads only to terminal second moves.
Decision select_action_two_piece(const LinearPolicy& policy, const Board& board,
                                 PieceKind piece, PieceKind next_piece,
                                 LookaheadOptions options = {});

}  // namespace tetrisw
