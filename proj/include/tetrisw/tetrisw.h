/*
 * tetrisw: Tetris afterstate simulator, feature catalogue, linear policies,
 * cross-entropy trainer, dominance filters and benchmark harness.
 *
 * C interface. Objects are opaque handles created by tw_*_create / load /
 * run functions and released with the matching tw_*_free. Every fallible
 * call returns a tw_status; on failure tw_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread).
 *
 * Strings returned as `const char*` are owned by the library. Functions that
 * fill a caller buffer take (buf, cap, needed): `needed` receives the full
 * size including the terminating NUL, and TW_ERR_BUFFER_TOO_SMALL is
 * returned when cap is insufficient.
 */
#ifndef TETRISW_TETRISW_H_
#define TETRISW_TETRISW_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TETRISW_BUILDING)
#    define TETRISW_API __declspec(dllexport)
#  else
#    define TETRISW_API __declspec(dllimport)
#  endif
#else
#  define TETRISW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tw_status {
  TW_OK = 0,
  TW_ERR_INVALID_ARGUMENT = 1,
  TW_ERR_PARSE = 2,
  TW_ERR_IO = 3,
  TW_ERR_STATE = 4,
  TW_ERR_BUFFER_TOO_SMALL = 5,
  TW_ERR_INTERNAL = 6
} tw_status;

typedef struct tw_board tw_board;
typedef struct tw_policy tw_policy;
typedef struct tw_episode tw_episode;
typedef struct tw_bench_report tw_bench_report;
typedef struct tw_train_result tw_train_result;
typedef struct tw_filter_report tw_filter_report;

TETRISW_API const char* tw_version(void);
TETRISW_API const char* tw_last_error(void);
TETRISW_API const char* tw_status_name(tw_status status);

/* ---- game configuration ------------------------------------------------ */

enum { TW_GAME_OVER_OVERFLOW = 0, TW_GAME_OVER_SPAWN_BLOCKED = 1 };

typedef struct tw_game_config {
  int width;
  int height;
  double scoring[4]; /* reward for clearing 1..4 lines at once */
  int game_over;     /* TW_GAME_OVER_* */
} tw_game_config;

/* 10 wide, 20 high, one point per line, overflow game over. */
TETRISW_API void tw_game_config_default(tw_game_config* cfg);
TETRISW_API tw_status tw_game_config_validate(const tw_game_config* cfg);

/* ---- boards and moves -------------------------------------------------- */

/* Pieces are identified by their letter: I O T S Z J L. */
typedef struct tw_placement {
  char piece;
  int rotation;
  int column;
} tw_placement;

typedef struct tw_move_outcome {
  int lines_cleared;
  double landing_height;
  int eroded_cells;
  int terminal;
} tw_move_outcome;

TETRISW_API tw_status tw_board_create_empty(int width, int height,
                                            tw_board** out);
/* Rows of 'X' and '.', top row first. A width or height of 0 is inferred. */
TETRISW_API tw_status tw_board_parse(const char* text, int width, int height,
                                     tw_board** out);
TETRISW_API tw_status tw_board_render(const tw_board* board, char* buf,
                                      size_t cap, size_t* needed);
TETRISW_API void tw_board_free(tw_board* board);
TETRISW_API int tw_board_width(const tw_board* board);
TETRISW_API int tw_board_height(const tw_board* board);
TETRISW_API int tw_board_column_height(const tw_board* board, int column);

/* Writes up to `cap` placements in (rotation, column) order; `count`
 * receives the total number available. */
TETRISW_API tw_status tw_legal_placements(const tw_board* board, char piece,
                                          tw_placement* out, size_t cap,
                                          size_t* count);
/* `post` may be NULL; otherwise it receives a new board handle. */
TETRISW_API tw_status tw_drop(const tw_board* board,
                              const tw_placement* placement,
                              tw_move_outcome* outcome, tw_board** post);

/* ---- features ---------------------------------------------------------- */

TETRISW_API size_t tw_feature_set_count(void);
TETRISW_API const char* tw_feature_set_name(size_t index);
TETRISW_API tw_status tw_feature_dimension(const char* set, int width,
                                           size_t* dimension);
TETRISW_API tw_status tw_feature_name(const char* set, int width, size_t index,
                                      const char** name);
/* Extracts `set` for the move `placement` from `board`. With a NULL
 * placement the board itself is the afterstate (no move features). */
TETRISW_API tw_status tw_features_extract(const char* set,
                                          const tw_board* board,
                                          const tw_placement* placement,
                                          double* values, size_t cap,
                                          size_t* count);

/* ---- policies ---------------------------------------------------------- */

/* Built-in name ("dellacherie") or the path of a policy file. */
TETRISW_API tw_status tw_policy_resolve(const char* name_or_path,
                                        tw_policy** out);
TETRISW_API tw_status tw_policy_create(const char* name, const char* set,
                                       const double* weights, size_t count,
                                       tw_policy** out);
/* Writes a policy file. `manifest_json` (may be NULL) is stored verbatim
 * under "manifest". */
TETRISW_API tw_status tw_policy_save(const tw_policy* policy, const char* path,
                                     const char* created, const char* notes,
                                     const char* manifest_json);
TETRISW_API void tw_policy_free(tw_policy* policy);
TETRISW_API const char* tw_policy_name(const tw_policy* policy);
TETRISW_API const char* tw_policy_feature_set(const tw_policy* policy);
TETRISW_API size_t tw_policy_weight_count(const tw_policy* policy);
TETRISW_API double tw_policy_weight(const tw_policy* policy, size_t index);

TETRISW_API tw_status tw_select_action(const tw_policy* policy,
                                       const tw_board* board, char piece,
                                       tw_placement* out, double* score);
/* sum_levels != 0 adds the first afterstate's value to the lookahead. */
TETRISW_API tw_status tw_select_action_two_piece(const tw_policy* policy,
                                                 const tw_board* board,
                                                 char piece, char next_piece,
                                                 int sum_levels,
                                                 tw_placement* out);

/* ---- episodes ---------------------------------------------------------- */

TETRISW_API tw_status tw_episode_create(const tw_game_config* cfg,
                                        uint64_t seed, tw_episode** out);
TETRISW_API void tw_episode_free(tw_episode* episode);
TETRISW_API char tw_episode_current_piece(const tw_episode* episode);
TETRISW_API char tw_episode_next_piece(const tw_episode* episode);
TETRISW_API int tw_episode_finished(const tw_episode* episode);
TETRISW_API double tw_episode_score(const tw_episode* episode);
TETRISW_API int64_t tw_episode_pieces(const tw_episode* episode);
TETRISW_API int64_t tw_episode_lines(const tw_episode* episode);
/* New handle holding a copy of the current board. */
TETRISW_API tw_status tw_episode_board(const tw_episode* episode,
                                       tw_board** out);
TETRISW_API tw_status tw_episode_step(tw_episode* episode,
                                      const tw_placement* placement,
                                      double* reward);

/* ---- benchmarking ------------------------------------------------------ */

typedef struct tw_episode_result {
  uint64_t seed;
  double total_reward;
  int64_t lines;
  int64_t pieces;
  int truncated;
  double millis;
} tw_episode_result;

typedef struct tw_bench_stats {
  size_t games;
  double mean, median, std, min, max;
  double ci_low, ci_high;
  int64_t total_pieces;
  double wall_ms;
  double placements_per_second;
} tw_bench_stats;

/* Expands `master_seed` into `count` episode seeds. */
TETRISW_API tw_status tw_expand_seeds(uint64_t master_seed, size_t count,
                                      uint64_t* seeds);

/* jobs = 0 uses one worker per hardware thread. two_piece != 0 plays with
 * next-piece lookahead. */
TETRISW_API tw_status tw_bench_run(const tw_policy* policy,
                                   const tw_game_config* cfg,
                                   const uint64_t* seeds, size_t games,
                                   int64_t piece_cap, int jobs, int two_piece,
                                   tw_bench_report** out);
TETRISW_API void tw_bench_report_free(tw_bench_report* report);
TETRISW_API tw_status tw_bench_report_stats(const tw_bench_report* report,
                                            tw_bench_stats* stats);
TETRISW_API tw_status tw_bench_report_episode(const tw_bench_report* report,
                                              size_t index,
                                              tw_episode_result* result);
/* Writes the per-episode CSV and the JSON summary. `manifest_json` is
 * embedded verbatim in the summary; either path may be NULL. */
TETRISW_API tw_status tw_bench_report_write(const tw_bench_report* report,
                                            const char* summary_path,
                                            const char* csv_path,
                                            const char* manifest_json);

TETRISW_API tw_status tw_adversarial_sz_episode(const tw_policy* policy,
                                                const tw_game_config* cfg,
                                                int64_t piece_cap,
                                                tw_episode_result* result);

/* ---- cross-entropy training ------------------------------------------- */

typedef struct tw_ce_config {
  int population;
  int elite;
  int generations;
  int games_per_candidate;
  double initial_std;
  double noise_a; /* variance noise max(noise_a - t / noise_b, 0) */
  double noise_b;
  uint64_t seed;
  int64_t piece_cap;
  int jobs;
} tw_ce_config;

typedef struct tw_generation_stats {
  int generation;
  double mean_elite_score;
  double best_score;
  double running_best;
  double noise;
  double millis;
} tw_generation_stats;

TETRISW_API void tw_ce_config_default(tw_ce_config* cfg,
                                      const tw_game_config* game);
TETRISW_API tw_status tw_train(const tw_ce_config* cfg,
                               const tw_game_config* game, const char* set,
                               tw_train_result** out);
TETRISW_API void tw_train_result_free(tw_train_result* result);
TETRISW_API double tw_train_result_best_score(const tw_train_result* result);
TETRISW_API tw_status tw_train_result_policy(const tw_train_result* result,
                                             tw_policy** out);
TETRISW_API size_t tw_train_result_generations(const tw_train_result* result);
TETRISW_API tw_status tw_train_result_generation(const tw_train_result* result,
                                                 size_t index,
                                                 tw_generation_stats* stats);
TETRISW_API tw_status tw_train_result_write_log(const tw_train_result* result,
                                                const char* csv_path);
TETRISW_API tw_status tw_evaluate_candidate(const double* weights,
                                            size_t count, const char* set,
                                            const tw_game_config* game,
                                            int games, uint64_t seed,
                                            int64_t piece_cap, double* score);

/* ---- dominance filters ------------------------------------------------- */

/* `features` is row-major n x d. higher_is_better[k] != 0 marks a feature to
 * maximize. With `order` NULL the simple filter runs; otherwise `order` is an
 * importance permutation and the cumulative filter runs. keep[i] receives 1
 * for survivors. */
TETRISW_API tw_status tw_dominance_filter(const double* features, size_t n,
                                          size_t d,
                                          const int* higher_is_better,
                                          const int* order, int* keep);

typedef struct tw_filter_summary {
  size_t decisions;
  double median_raw;
  double median_simple;
  double median_cumulative;
  int nesting_holds;
} tw_filter_summary;

TETRISW_API tw_status tw_filter_stats(const tw_policy* policy,
                                      const tw_game_config* cfg, size_t games,
                                      uint64_t seed, int64_t piece_cap,
                                      int jobs, int standardize,
                                      tw_filter_report** out);
TETRISW_API void tw_filter_report_free(tw_filter_report* report);
TETRISW_API tw_status tw_filter_report_summary(const tw_filter_report* report,
                                               tw_filter_summary* summary);
TETRISW_API tw_status tw_filter_report_write(const tw_filter_report* report,
                                             const char* path,
                                             const char* manifest_json);

#ifdef __cplusplus
}
#endif

#endif /* TETRISW_TETRISW_H_ */
