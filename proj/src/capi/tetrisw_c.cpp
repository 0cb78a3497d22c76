#include "tetrisw/tetrisw.h"

#include <cstring>
#include <string>
#include <vector>

#include "../core/bench.hpp"
#include "../core/dominance.hpp"
#include "../core/engine.hpp"
#include "../core/features.hpp"
#include "../core/io.hpp"
#include "../core/optimize.hpp"
#include "../core/policy.hpp"

using namespace tetrisw;

struct tw_board {
  Board board;
};
struct tw_policy {
  LinearPolicy policy;
  std::string set_name;
};
struct tw_episode {
  Episode episode;
};
struct tw_bench_report {
  BenchReport report;
};
struct tw_train_result {
  TrainResult result;
  std::vector<std::string> feature_names;
};
struct tw_filter_report {
  FilterReport report;
};

namespace {

thread_local std::string g_last_error;

tw_status fail(tw_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes. Invalid arguments map
// to `invalid_as` so parsers can report TW_ERR_PARSE.
template <typename Fn>
tw_status guard(Fn&& fn, tw_status invalid_as = TW_ERR_INVALID_ARGUMENT) {
  try {
    return fn();
  } catch (const IoError& e) {
    return fail(TW_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(invalid_as, e.what());
  } catch (const std::logic_error& e) {
    return fail(TW_ERR_STATE, e.what());
  } catch (const std::exception& e) {
    return fail(TW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TW_ERR_INTERNAL, "unknown error");
  }
}

tw_status null_arg(const char* what) {
  return fail(TW_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

GameConfig to_game(const tw_game_config* cfg) {
  GameConfig g;
  if (cfg == nullptr) return g;
  g.width = cfg->width;
  g.height = cfg->height;
  for (int i = 0; i < 4; ++i) g.scoring[i] = cfg->scoring[i];
  if (cfg->game_over != TW_GAME_OVER_OVERFLOW &&
      cfg->game_over != TW_GAME_OVER_SPAWN_BLOCKED)
    throw std::invalid_argument("unknown game-over variant");
  g.game_over = cfg->game_over == TW_GAME_OVER_SPAWN_BLOCKED
                    ? GameOverVariant::kSpawnBlocked
                    : GameOverVariant::kOverflow;
  g.validate();
  return g;
}

PieceKind to_piece(char c) {
  if (auto p = piece_from_char(c)) return *p;
  throw std::invalid_argument("unknown piece '" + std::string(1, c) + "'");
}

FeatureSetId to_set(const char* name) {
  if (name == nullptr) throw std::invalid_argument("feature set is NULL");
  if (auto s = feature_set_from_name(name)) return *s;
  throw std::invalid_argument("unknown feature set '" + std::string(name) + "'");
}

Placement to_placement(const tw_placement& p) {
  return {to_piece(p.piece), p.rotation, p.column};
}

tw_placement from_placement(const Placement& p) {
  return {piece_char(p.piece), p.rotation, p.column};
}

tw_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf == nullptr || cap < s.size() + 1)
    return fail(TW_ERR_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return TW_OK;
}

tw_episode_result from_result(const EpisodeResult& r) {
  return {r.seed, r.total_reward, r.lines, r.pieces, r.truncated ? 1 : 0, r.millis};
}

tw_policy* wrap(LinearPolicy p) {
  std::string set_name(feature_set_name(p.set));
  return new tw_policy{std::move(p), std::move(set_name)};
}

nlohmann::json parse_manifest(const char* manifest_json) {
  if (manifest_json == nullptr || *manifest_json == '\0') return nlohmann::json::object();
  try {
    return nlohmann::json::parse(manifest_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest is not valid JSON: ") + e.what());
  }
}

}  // namespace

extern "C" {

const char* tw_version(void) { return "1.0.0"; }

const char* tw_last_error(void) { return g_last_error.c_str(); }

const char* tw_status_name(tw_status status) {
  switch (status) {
    case TW_OK: return "ok";
    case TW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TW_ERR_PARSE: return "parse error";
    case TW_ERR_IO: return "i/o error";
    case TW_ERR_STATE: return "invalid state";
    case TW_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case TW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void tw_game_config_default(tw_game_config* cfg) {
  if (cfg == nullptr) return;
  const GameConfig g;
  cfg->width = g.width;
  cfg->height = g.height;
  for (int i = 0; i < 4; ++i) cfg->scoring[i] = g.scoring[i];
  cfg->game_over = TW_GAME_OVER_OVERFLOW;
}

tw_status tw_game_config_validate(const tw_game_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guard([&] {
    to_game(cfg);
    return TW_OK;
  });
}

/* boards */

tw_status tw_board_create_empty(int width, int height, tw_board** out) {
  if (!out) return null_arg("out");
  return guard([&] {
    GameConfig g;
    g.width = width;
    g.height = height;
    g.validate();
    *out = new tw_board{Board(width, height)};
    return TW_OK;
  });
}

tw_status tw_board_parse(const char* text, int width, int height, tw_board** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guard(
      [&] {
        *out = new tw_board{parse_board(text, width, height)};
        return TW_OK;
      },
      TW_ERR_PARSE);
}

tw_status tw_board_render(const tw_board* board, char* buf, size_t cap, size_t* needed) {
  if (!board) return null_arg("board");
  return copy_out(render_board(board->board), buf, cap, needed);
}

void tw_board_free(tw_board* board) { delete board; }

int tw_board_width(const tw_board* board) { return board ? board->board.width() : 0; }
int tw_board_height(const tw_board* board) { return board ? board->board.height() : 0; }

int tw_board_column_height(const tw_board* board, int column) {
  if (!board || column < 0 || column >= board->board.width()) return -1;
  return board->board.column_height(column);
}

tw_status tw_legal_placements(const tw_board* board, char piece, tw_placement* out,
                              size_t cap, size_t* count) {
  if (!board) return null_arg("board");
  return guard([&] {
    const auto all = legal_placements(board->board, to_piece(piece));
    if (count) *count = all.size();
    if (out)
      for (size_t i = 0; i < all.size() && i < cap; ++i) out[i] = from_placement(all[i]);
    if (out && cap < all.size())
      return fail(TW_ERR_BUFFER_TOO_SMALL, "placement buffer too small");
    return TW_OK;
  });
}

tw_status tw_drop(const tw_board* board, const tw_placement* placement,
                  tw_move_outcome* outcome, tw_board** post) {
  if (!board) return null_arg("board");
  if (!placement) return null_arg("placement");
  return guard([&] {
    MoveOutcome o = drop(board->board, to_placement(*placement));
    if (outcome)
      *outcome = {o.lines_cleared, o.landing_height, o.eroded_cells, o.terminal ? 1 : 0};
    if (post) *post = new tw_board{o.post};
    return TW_OK;
  });
}

/* features */

size_t tw_feature_set_count(void) { return kAllFeatureSets.size(); }

const char* tw_feature_set_name(size_t index) {
  if (index >= kAllFeatureSets.size()) return nullptr;
  return feature_set_name(kAllFeatureSets[index]).data();
}

tw_status tw_feature_dimension(const char* set, int width, size_t* dimension) {
  if (!dimension) return null_arg("dimension");
  return guard([&] {
    *dimension = static_cast<size_t>(feature_dimension(to_set(set), width));
    return TW_OK;
  });
}

tw_status tw_feature_name(const char* set, int width, size_t index, const char** name) {
  if (!name) return null_arg("name");
  return guard([&] {
    const FeatureSetId id = to_set(set);
    if (width < 1 || width > kMaxWidth) throw std::invalid_argument("width out of range");
    // Names are interned per (set, width) so the returned pointer stays valid.
    static thread_local std::vector<std::vector<std::string>> cache(
        kAllFeatureSets.size() * (kMaxWidth + 1));
    auto& names = cache[static_cast<size_t>(id) * (kMaxWidth + 1) + width];
    if (names.empty()) names = feature_names(id, width);
    if (index >= names.size()) throw std::invalid_argument("feature index out of range");
    *name = names[index].c_str();
    return TW_OK;
  });
}

tw_status tw_features_extract(const char* set, const tw_board* board,
                              const tw_placement* placement, double* values,
                              size_t cap, size_t* count) {
  if (!board) return null_arg("board");
  return guard([&] {
    const FeatureSetId id = to_set(set);
    const MoveOutcome o = placement ? drop(board->board, to_placement(*placement))
                                    : null_outcome(board->board);
    const FeatureVector fv = extract(id, {board->board, o});
    if (count) *count = fv.values.size();
    if (!values || cap < fv.values.size())
      return fail(TW_ERR_BUFFER_TOO_SMALL, "feature buffer too small");
    std::copy(fv.values.begin(), fv.values.end(), values);
    return TW_OK;
  });
}

/* policies */

tw_status tw_policy_resolve(const char* name_or_path, tw_policy** out) {
  if (!name_or_path) return null_arg("name_or_path");
  if (!out) return null_arg("out");
  return guard(
      [&] {
        *out = wrap(resolve_policy(name_or_path));
        return TW_OK;
      },
      TW_ERR_PARSE);
}

tw_status tw_policy_create(const char* name, const char* set, const double* weights,
                           size_t count, tw_policy** out) {
  if (!out) return null_arg("out");
  if (!weights && count > 0) return null_arg("weights");
  return guard([&] {
    LinearPolicy p{name ? name : "unnamed", to_set(set),
                   std::vector<double>(weights, weights + count)};
    for (double w : p.weights)
      if (!std::isfinite(w)) throw std::invalid_argument("weights must be finite");
    *out = wrap(std::move(p));
    return TW_OK;
  });
}

tw_status tw_policy_save(const tw_policy* policy, const char* path, const char* created,
                         const char* notes, const char* manifest_json) {
  if (!policy) return null_arg("policy");
  if (!path) return null_arg("path");
  return guard([&] {
    nlohmann::json manifest;
    if (manifest_json && *manifest_json) manifest = parse_manifest(manifest_json);
    save_policy({policy->policy, created ? created : "", notes ? notes : "", manifest}, path);
    return TW_OK;
  });
}

void tw_policy_free(tw_policy* policy) { delete policy; }

const char* tw_policy_name(const tw_policy* policy) {
  return policy ? policy->policy.name.c_str() : nullptr;
}

const char* tw_policy_feature_set(const tw_policy* policy) {
  return policy ? policy->set_name.c_str() : nullptr;
}

size_t tw_policy_weight_count(const tw_policy* policy) {
  return policy ? policy->policy.weights.size() : 0;
}

double tw_policy_weight(const tw_policy* policy, size_t index) {
  if (!policy || index >= policy->policy.weights.size()) return 0.0;
  return policy->policy.weights[index];
}

tw_status tw_select_action(const tw_policy* policy, const tw_board* board, char piece,
                           tw_placement* out, double* score) {
  if (!policy) return null_arg("policy");
  if (!board) return null_arg("board");
  if (!out) return null_arg("out");
  return guard([&] {
    const Decision d = select_action(policy->policy, board->board, to_piece(piece));
    *out = from_placement(d.placement);
    if (score) *score = d.score;
    return TW_OK;
  });
}

tw_status tw_select_action_two_piece(const tw_policy* policy, const tw_board* board,
                                     char piece, char next_piece, int sum_levels,
                                     tw_placement* out) {
  if (!policy) return null_arg("policy");
  if (!board) return null_arg("board");
  if (!out) return null_arg("out");
  return guard([&] {
    const Decision d =
        select_action_two_piece(policy->policy, board->board, to_piece(piece),
                                to_piece(next_piece), {sum_levels != 0});
    *out = from_placement(d.placement);
    return TW_OK;
  });
}

/* episodes */

tw_status tw_episode_create(const tw_game_config* cfg, uint64_t seed, tw_episode** out) {
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new tw_episode{Episode(to_game(cfg), seed)};
    return TW_OK;
  });
}

void tw_episode_free(tw_episode* episode) { delete episode; }

char tw_episode_current_piece(const tw_episode* e) {
  return e ? piece_char(e->episode.current_piece()) : '\0';
}
char tw_episode_next_piece(const tw_episode* e) {
  return e ? piece_char(e->episode.next_piece()) : '\0';
}
int tw_episode_finished(const tw_episode* e) { return e && e->episode.finished() ? 1 : 0; }
double tw_episode_score(const tw_episode* e) { return e ? e->episode.score() : 0.0; }
int64_t tw_episode_pieces(const tw_episode* e) { return e ? e->episode.pieces_placed() : 0; }
int64_t tw_episode_lines(const tw_episode* e) { return e ? e->episode.lines_cleared() : 0; }

tw_status tw_episode_board(const tw_episode* episode, tw_board** out) {
  if (!episode) return null_arg("episode");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new tw_board{episode->episode.board()};
    return TW_OK;
  });
}

tw_status tw_episode_step(tw_episode* episode, const tw_placement* placement,
                          double* reward) {
  if (!episode) return null_arg("episode");
  if (!placement) return null_arg("placement");
  return guard([&] {
    const double r = episode->episode.step(to_placement(*placement));
    if (reward) *reward = r;
    return TW_OK;
  });
}

/* benchmarking */

tw_status tw_expand_seeds(uint64_t master_seed, size_t count, uint64_t* seeds) {
  if (!seeds && count > 0) return null_arg("seeds");
  const auto v = expand_seeds(master_seed, count);
  std::copy(v.begin(), v.end(), seeds);
  return TW_OK;
}

tw_status tw_bench_run(const tw_policy* policy, const tw_game_config* cfg,
                       const uint64_t* seeds, size_t games, int64_t piece_cap, int jobs,
                       int two_piece, tw_bench_report** out) {
  if (!policy) return null_arg("policy");
  if (!seeds) return null_arg("seeds");
  if (!out) return null_arg("out");
  return guard([&] {
    PlayOptions opts;
    opts.two_piece = two_piece != 0;
    *out = new tw_bench_report{run_benchmark(policy->policy, to_game(cfg),
                                             {seeds, games}, piece_cap, jobs, opts)};
    return TW_OK;
  });
}

void tw_bench_report_free(tw_bench_report* report) { delete report; }

tw_status tw_bench_report_stats(const tw_bench_report* report, tw_bench_stats* stats) {
  if (!report) return null_arg("report");
  if (!stats) return null_arg("stats");
  const auto& r = report->report;
  const auto& s = r.lines;
  *stats = {s.count,  s.mean,          s.median,    s.std,
            s.min,    s.max,           s.ci_low,    s.ci_high,
            r.total_pieces, r.wall_ms, r.placements_per_second};
  return TW_OK;
}

tw_status tw_bench_report_episode(const tw_bench_report* report, size_t index,
                                  tw_episode_result* result) {
  if (!report) return null_arg("report");
  if (!result) return null_arg("result");
  if (index >= report->report.episodes.size())
    return fail(TW_ERR_INVALID_ARGUMENT, "episode index out of range");
  *result = from_result(report->report.episodes[index]);
  return TW_OK;
}

tw_status tw_bench_report_write(const tw_bench_report* report, const char* summary_path,
                                const char* csv_path, const char* manifest_json) {
  if (!report) return null_arg("report");
  return guard([&] {
    if (summary_path) {
      nlohmann::json doc = bench_summary(report->report);
      doc["manifest"] = parse_manifest(manifest_json);
      write_text_file(summary_path, doc.dump(2) + "\n");
    }
    if (csv_path) write_text_file(csv_path, bench_csv(report->report));
    return TW_OK;
  });
}

tw_status tw_adversarial_sz_episode(const tw_policy* policy, const tw_game_config* cfg,
                                    int64_t piece_cap, tw_episode_result* result) {
  if (!policy) return null_arg("policy");
  if (!result) return null_arg("result");
  return guard([&] {
    *result = from_result(adversarial_sz_episode(policy->policy, to_game(cfg), piece_cap));
    return TW_OK;
  });
}

/* training */

void tw_ce_config_default(tw_ce_config* cfg, const tw_game_config* game) {
  if (cfg == nullptr) return;
  GameConfig g;
  if (game) {
    g.width = game->width;
    g.height = game->height;
  }
  const CeConfig c = default_ce_config(g);
  *cfg = {c.population, c.elite,   c.generations, c.games_per_candidate, c.initial_std,
          c.noise_a,    c.noise_b, c.seed,        c.piece_cap,           c.jobs};
}

tw_status tw_train(const tw_ce_config* cfg, const tw_game_config* game, const char* set,
                   tw_train_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guard([&] {
    CeConfig c;
    c.population = cfg->population;
    c.elite = cfg->elite;
    c.generations = cfg->generations;
    c.games_per_candidate = cfg->games_per_candidate;
    c.initial_std = cfg->initial_std;
    c.noise_a = cfg->noise_a;
    c.noise_b = cfg->noise_b;
    c.seed = cfg->seed;
    c.piece_cap = cfg->piece_cap;
    c.jobs = cfg->jobs;
    const GameConfig g = to_game(game);
    const FeatureSetId id = to_set(set);
    *out = new tw_train_result{ce_train(c, g, id), feature_names(id, g.width)};
    return TW_OK;
  });
}

void tw_train_result_free(tw_train_result* result) { delete result; }

double tw_train_result_best_score(const tw_train_result* result) {
  return result ? result->result.best_score : 0.0;
}

tw_status tw_train_result_policy(const tw_train_result* result, tw_policy** out) {
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  *out = wrap(result->result.best);
  return TW_OK;
}

size_t tw_train_result_generations(const tw_train_result* result) {
  return result ? result->result.log.size() : 0;
}

tw_status tw_train_result_generation(const tw_train_result* result, size_t index,
                                     tw_generation_stats* stats) {
  if (!result) return null_arg("result");
  if (!stats) return null_arg("stats");
  if (index >= result->result.log.size())
    return fail(TW_ERR_INVALID_ARGUMENT, "generation index out of range");
  const auto& r = result->result.log[index];
  *stats = {r.generation, r.mean_elite_score, r.best_score, r.running_best, r.noise, r.millis};
  return TW_OK;
}

tw_status tw_train_result_write_log(const tw_train_result* result, const char* csv_path) {
  if (!result) return null_arg("result");
  if (!csv_path) return null_arg("csv_path");
  return guard([&] {
    write_text_file(csv_path, train_log_csv(result->result, result->feature_names));
    return TW_OK;
  });
}

tw_status tw_evaluate_candidate(const double* weights, size_t count, const char* set,
                                const tw_game_config* game, int games, uint64_t seed,
                                int64_t piece_cap, double* score) {
  if (!weights && count > 0) return null_arg("weights");
  if (!score) return null_arg("score");
  return guard([&] {
    *score = evaluate_candidate({weights, count}, to_set(set), to_game(game), games, seed,
                                piece_cap);
    return TW_OK;
  });
}

/* dominance */

tw_status tw_dominance_filter(const double* features, size_t n, size_t d,
                              const int* higher_is_better, const int* order, int* keep) {
  if (!features) return null_arg("features");
  if (!higher_is_better) return null_arg("higher_is_better");
  if (!keep) return null_arg("keep");
  return guard([&] {
    std::vector<FeatureVector> cands;
    for (size_t i = 0; i < n; ++i)
      cands.push_back({FeatureSetId::kDellacherie,
                       std::vector<double>(features + i * d, features + (i + 1) * d)});
    OrientationSpec orient;
    for (size_t k = 0; k < d; ++k)
      orient.push_back(higher_is_better[k] ? Direction::kHigherIsBetter
                                           : Direction::kLowerIsBetter);
    const auto survivors =
        order ? cumulative_dominance_filter(cands, orient, ImportanceOrder(order, order + d))
              : simple_dominance_filter(cands, orient);
    std::fill(keep, keep + n, 0);
    for (size_t i : survivors) keep[i] = 1;
    return TW_OK;
  });
}

tw_status tw_filter_stats(const tw_policy* policy, const tw_game_config* cfg, size_t games,
                          uint64_t seed, int64_t piece_cap, int jobs, int standardize,
                          tw_filter_report** out) {
  if (!policy) return null_arg("policy");
  if (!out) return null_arg("out");
  return guard([&] {
    FilterOptions opts;
    opts.piece_cap = piece_cap;
    opts.jobs = jobs;
    opts.standardize = standardize != 0;
    *out = new tw_filter_report{filter_stats(policy->policy, games, seed, to_game(cfg), opts)};
    return TW_OK;
  });
}

void tw_filter_report_free(tw_filter_report* report) { delete report; }

tw_status tw_filter_report_summary(const tw_filter_report* report,
                                   tw_filter_summary* summary) {
  if (!report) return null_arg("report");
  if (!summary) return null_arg("summary");
  const auto& r = report->report;
  *summary = {r.records.size(), r.median_raw, r.median_simple, r.median_cumulative,
              r.nesting_holds ? 1 : 0};
  return TW_OK;
}

tw_status tw_filter_report_write(const tw_filter_report* report, const char* path,
                                 const char* manifest_json) {
  if (!report) return null_arg("report");
  if (!path) return null_arg("path");
  return guard([&] {
    write_text_file(path, filter_report_jsonl(report->report, parse_manifest(manifest_json)));
    return TW_OK;
  });
}

}  // extern "C"
