// tetrisw command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tetrisw/tetrisw.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Raised for failures after argument parsing succeeded.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(tw_status s, const std::string& what) {
  if (s != TW_OK)
    throw RuntimeFailure(what + ": " + tw_status_name(s) + ": " + tw_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using BoardPtr = std::unique_ptr<tw_board, Deleter<tw_board, tw_board_free>>;
using PolicyPtr = std::unique_ptr<tw_policy, Deleter<tw_policy, tw_policy_free>>;
using EpisodePtr = std::unique_ptr<tw_episode, Deleter<tw_episode, tw_episode_free>>;
using BenchPtr = std::unique_ptr<tw_bench_report, Deleter<tw_bench_report, tw_bench_report_free>>;
using TrainPtr = std::unique_ptr<tw_train_result, Deleter<tw_train_result, tw_train_result_free>>;
using FilterPtr =
    std::unique_ptr<tw_filter_report, Deleter<tw_filter_report, tw_filter_report_free>>;

// Options shared by every subcommand that plays games.
struct GameOptions {
  std::string grid;
  std::string game_over = "overflow";
  std::vector<double> scoring{1, 2, 3, 4};

  tw_game_config resolve(const std::string& default_grid) const {
    tw_game_config cfg;
    tw_game_config_default(&cfg);
    const std::string g = grid.empty() ? default_grid : grid;
    int w = 0, h = 0;
    char x = 0;
    std::istringstream in(g);
    if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || !in.eof())
      throw UsageFailure("--grid must look like WxH, got '" + g + "'");
    cfg.width = w;
    cfg.height = h;
    if (scoring.size() != 4) throw UsageFailure("--scoring needs exactly 4 values");
    for (int i = 0; i < 4; ++i) cfg.scoring[i] = scoring[i];
    if (game_over == "overflow")
      cfg.game_over = TW_GAME_OVER_OVERFLOW;
    else if (game_over == "spawn-blocked")
      cfg.game_over = TW_GAME_OVER_SPAWN_BLOCKED;
    else
      throw UsageFailure("--game-over must be overflow or spawn-blocked");
    if (tw_game_config_validate(&cfg) != TW_OK) throw UsageFailure(tw_last_error());
    return cfg;
  }

  void add_to(CLI::App* app, const std::string& default_grid) {
    app->add_option("--grid", grid, "Board size as WxH (default " + default_grid + ")");
    app->add_option("--game-over", game_over, "overflow | spawn-blocked")
        ->capture_default_str();
    app->add_option("--scoring", scoring, "Rewards for clearing 1,2,3,4 lines")
        ->delimiter(',')
        ->expected(4);
  }
};

json game_json(const tw_game_config& cfg) {
  return json{{"width", cfg.width},
              {"height", cfg.height},
              {"scoring", std::vector<double>(cfg.scoring, cfg.scoring + 4)},
              {"game_over", cfg.game_over == TW_GAME_OVER_OVERFLOW ? "overflow"
                                                                   : "spawn-blocked"}};
}

json policy_json(const tw_policy* p) {
  std::vector<double> w;
  for (size_t i = 0; i < tw_policy_weight_count(p); ++i) w.push_back(tw_policy_weight(p, i));
  return json{{"name", tw_policy_name(p)},
              {"feature_set", tw_policy_feature_set(p)},
              {"weights", w}};
}

std::vector<std::string> g_argv;

json manifest(const std::string& command, json fields) {
  fields["tool"] = "tetrisw";
  fields["version"] = tw_version();
  fields["command"] = command;
  fields["argv"] = g_argv;
  return fields;
}

int default_jobs() {
  if (const char* env = std::getenv("TETRISW_JOBS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
    }
  }
  return 0;
}

PolicyPtr load_policy(const std::string& name) {
  tw_policy* p = nullptr;
  check(tw_policy_resolve(name.c_str(), &p), "loading policy '" + name + "'");
  return PolicyPtr(p);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BoardPtr load_board(const std::string& path, const GameOptions& game) {
  tw_board* b = nullptr;
  if (path.empty()) {
    const tw_game_config cfg = game.resolve("10x20");
    check(tw_board_create_empty(cfg.width, cfg.height, &b), "creating board");
  } else {
    check(tw_board_parse(read_file(path).c_str(), 0, 0, &b), "parsing '" + path + "'");
  }
  return BoardPtr(b);
}

std::vector<uint64_t> seeds_for(uint64_t master, size_t n) {
  std::vector<uint64_t> seeds(n);
  check(tw_expand_seeds(master, n, seeds.data()), "expanding seeds");
  return seeds;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

// ---- enumerate -----------------------------------------------------------

struct EnumerateCmd {
  std::string piece;
  std::string board;
  GameOptions game;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("enumerate", "List every legal placement of a piece");
    app->add_option("--piece", piece, "Piece letter: I O T S Z J L")->required();
    app->add_option("--board", board, "Board file (default: empty board of --grid)");
    game.add_to(app, "10x20");
    app->callback([this] { run(); });
  }

  void run() {
    if (piece.size() != 1) throw UsageFailure("--piece must be a single letter");
    BoardPtr b = load_board(board, game);
    size_t n = 0;
    check(tw_legal_placements(b.get(), piece[0], nullptr, 0, &n), "enumerating");
    std::vector<tw_placement> ps(n);
    check(tw_legal_placements(b.get(), piece[0], ps.data(), n, &n), "enumerating");
    std::cout << "piece,rotation,column,lines_cleared,landing_height,eroded_cells,terminal\n";
    for (const auto& p : ps) {
      tw_move_outcome o;
      check(tw_drop(b.get(), &p, &o, nullptr), "dropping");
      std::cout << p.piece << ',' << p.rotation << ',' << p.column << ',' << o.lines_cleared
                << ',' << fmt(o.landing_height) << ',' << o.eroded_cells << ','
                << o.terminal << '\n';
    }
    std::cerr << n << " placements\n";
  }
};

// ---- features ------------------------------------------------------------

struct FeaturesCmd {
  std::string set;
  std::string board;
  std::string move = "none";
  std::string piece;
  GameOptions game;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("features", "Feature-set utilities");
    app->require_subcommand(1);
    auto* list = app->add_subcommand("list", "List feature sets and their dimensions");
    list->callback([] {
      for (size_t i = 0; i < tw_feature_set_count(); ++i) {
        size_t d = 0;
        check(tw_feature_dimension(tw_feature_set_name(i), 10, &d), "dimension");
        std::cout << tw_feature_set_name(i) << ' ' << d << '\n';
      }
    });
    auto* dump = app->add_subcommand("dump", "Print name=value for one feature set");
    dump->add_option("--set", set, "Feature set name (e.g. dellacherie)")->required();
    dump->add_option("--board", board, "Board file (default: empty board of --grid)");
    dump->add_option("--move", move, "none, or ROTATION,COLUMN for --piece")
        ->capture_default_str();
    dump->add_option("--piece", piece, "Piece letter for --move");
    game.add_to(dump, "10x20");
    dump->callback([this] { run(); });
  }

  void run() {
    BoardPtr b = load_board(board, game);
    std::optional<tw_placement> placement;
    if (move != "none") {
      if (piece.size() != 1) throw UsageFailure("--move needs --piece");
      tw_placement p{piece[0], 0, 0};
      char comma = 0;
      std::istringstream in(move);
      if (!(in >> p.rotation >> comma >> p.column) || comma != ',')
        throw UsageFailure("--move must be none or ROTATION,COLUMN");
      placement = p;
    }
    size_t dim = 0;
    check(tw_feature_dimension(set.c_str(), tw_board_width(b.get()), &dim), "feature set");
    std::vector<double> values(dim);
    check(tw_features_extract(set.c_str(), b.get(), placement ? &*placement : nullptr,
                              values.data(), dim, &dim),
          "extracting features");
    for (size_t i = 0; i < dim; ++i) {
      const char* name = nullptr;
      check(tw_feature_name(set.c_str(), tw_board_width(b.get()), i, &name), "feature name");
      std::cout << name << '=' << fmt(values[i]) << '\n';
    }
  }
};

// ---- play ------------------------------------------------------------------

struct PlayCmd {
  std::string policy = "dellacherie";
  uint64_t seed = 0;
  int64_t cap = 100000;
  bool two_piece = false;
  bool sum_levels = false;
  bool show_board = false;
  std::string out;
  GameOptions game;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("play", "Play one seeded game and print its trajectory");
    app->add_option("--policy", policy, "Built-in name or policy file")->capture_default_str();
    app->add_option("--seed", seed, "Episode seed")->capture_default_str();
    app->add_option("--cap", cap, "Piece cap")->capture_default_str();
    app->add_flag("--two-piece", two_piece, "Use next-piece lookahead");
    app->add_flag("--sum-levels", sum_levels, "Lookahead adds the first afterstate's value");
    app->add_flag("--show-board", show_board, "Print the final board");
    app->add_option("--out", out, "Trajectory CSV (default: stdout)");
    game.add_to(app, "10x20");
    app->callback([this] { run(); });
  }

  void run() {
    if (cap < 1) throw UsageFailure("--cap must be >= 1");
    const tw_game_config cfg = game.resolve("10x20");
    PolicyPtr p = load_policy(policy);
    tw_episode* raw = nullptr;
    check(tw_episode_create(&cfg, seed, &raw), "creating episode");
    EpisodePtr ep(raw);

    std::ostringstream traj;
    traj << "step,piece,rotation,column,reward,lines\n";
    while (!tw_episode_finished(ep.get()) && tw_episode_pieces(ep.get()) < cap) {
      BoardPtr b;
      {
        tw_board* braw = nullptr;
        check(tw_episode_board(ep.get(), &braw), "reading board");
        b.reset(braw);
      }
      const char piece = tw_episode_current_piece(ep.get());
      tw_placement choice;
      if (two_piece)
        check(tw_select_action_two_piece(p.get(), b.get(), piece,
                                         tw_episode_next_piece(ep.get()), sum_levels ? 1 : 0,
                                         &choice),
              "selecting");
      else
        check(tw_select_action(p.get(), b.get(), piece, &choice, nullptr), "selecting");
      const int64_t step = tw_episode_pieces(ep.get());
      double reward = 0;
      check(tw_episode_step(ep.get(), &choice, &reward), "stepping");
      traj << step << ',' << choice.piece << ',' << choice.rotation << ',' << choice.column
           << ',' << fmt(reward) << ',' << tw_episode_lines(ep.get()) << '\n';
    }
    if (out.empty()) {
      std::cout << traj.str();
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f || !(f << traj.str())) throw RuntimeFailure("cannot write '" + out + "'");
    }
    std::cerr << "lines=" << tw_episode_lines(ep.get())
              << " pieces=" << tw_episode_pieces(ep.get())
              << " score=" << fmt(tw_episode_score(ep.get()))
              << " finished=" << tw_episode_finished(ep.get()) << '\n';
    if (show_board) {
      tw_board* braw = nullptr;
      check(tw_episode_board(ep.get(), &braw), "reading board");
      BoardPtr b(braw);
      size_t need = 0;
      tw_board_render(b.get(), nullptr, 0, &need);
      std::string text(need, '\0');
      check(tw_board_render(b.get(), text.data(), need, &need), "rendering");
      text.pop_back();
      std::cerr << text;
    }
  }
};

// ---- bench -----------------------------------------------------------------

struct BenchCmd {
  std::string policy = "dellacherie";
  size_t games = 30;
  uint64_t seed = 0;
  int64_t cap = 1000000;
  int jobs = default_jobs();
  bool two_piece = false;
  std::string out;
  GameOptions game;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("bench", "Play seeded games and report line statistics");
    app->add_option("--policy", policy, "Built-in name or policy file")->capture_default_str();
    app->add_option("--games", games, "Number of games")->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--cap", cap, "Piece cap per game")->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads (0 = all cores; env TETRISW_JOBS)")
        ->capture_default_str();
    app->add_flag("--two-piece", two_piece, "Use next-piece lookahead");
    app->add_option("--out", out, "Report prefix: writes PREFIX.json and PREFIX.csv");
    game.add_to(app, "10x10");
    app->callback([this] { run(); });
  }

  void run() {
    if (games < 1) throw UsageFailure("--games must be >= 1");
    if (cap < 1) throw UsageFailure("--cap must be >= 1");
    const tw_game_config cfg = game.resolve("10x10");
    PolicyPtr p = load_policy(policy);
    const auto seeds = seeds_for(seed, games);
    tw_bench_report* raw = nullptr;
    check(tw_bench_run(p.get(), &cfg, seeds.data(), seeds.size(), cap, jobs,
                       two_piece ? 1 : 0, &raw),
          "benchmark");
    BenchPtr report(raw);
    tw_bench_stats s;
    check(tw_bench_report_stats(report.get(), &s), "stats");
    if (!out.empty()) {
      const json m = manifest("bench", {{"game", game_json(cfg)},
                                        {"policy", policy_json(p.get())},
                                        {"seed", seed},
                                        {"games", games},
                                        {"cap", cap},
                                        {"two_piece", two_piece}});
      const std::string js = out + ".json", csv = out + ".csv";
      check(tw_bench_report_write(report.get(), js.c_str(), csv.c_str(), m.dump().c_str()),
            "writing report");
    }
    std::cout << "games=" << s.games << " mean=" << fmt(s.mean) << " median=" << fmt(s.median)
              << " std=" << fmt(s.std) << " min=" << fmt(s.min) << " max=" << fmt(s.max)
              << " ci95=[" << fmt(s.ci_low) << ", " << fmt(s.ci_high) << "]"
              << " pieces=" << s.total_pieces
              << " placements_per_sec=" << static_cast<int64_t>(s.placements_per_second) << '\n';
  }
};

// ---- train -----------------------------------------------------------------

struct TrainCmd {
  std::string set = "dellacherie";
  std::optional<int> generations, population, elite, games_per_candidate;
  std::optional<double> initial_std, noise_a, noise_b;
  std::optional<int64_t> cap;
  uint64_t seed = 0;
  int jobs = default_jobs();
  std::string out;
  std::string log;
  GameOptions game;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("train", "Cross-entropy search for linear policy weights");
    app->add_option("--set", set, "Feature set")->capture_default_str();
    app->add_option("--generations", generations, "Generations (default 50)");
    app->add_option("--pop", population, "Population per generation (default 100)");
    app->add_option("--elite", elite, "Elite count (default 10)");
    app->add_option("--games-per-candidate", games_per_candidate,
                    "Games per candidate (default 1, or 5 on 20-row grids)");
    app->add_option("--std", initial_std, "Initial standard deviation (default 100)");
    app->add_option("--noise-a", noise_a, "Noise schedule a in max(a - t/b, 0) (default 5)");
    app->add_option("--noise-b", noise_b, "Noise schedule b (default 10)");
    app->add_option("--cap", cap, "Piece cap per game (default 200000)");
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();
    app->add_option("--out", out, "Policy file to write")->required();
    app->add_option("--log", log, "Per-generation CSV log");
    game.add_to(app, "10x10");
    app->callback([this] { run(); });
  }

  void run() {
    const tw_game_config g = game.resolve("10x10");
    tw_ce_config cfg;
    tw_ce_config_default(&cfg, &g);
    if (generations) cfg.generations = *generations;
    if (population) cfg.population = *population;
    if (elite) cfg.elite = *elite;
    if (games_per_candidate) cfg.games_per_candidate = *games_per_candidate;
    if (initial_std) cfg.initial_std = *initial_std;
    if (noise_a) cfg.noise_a = *noise_a;
    if (noise_b) cfg.noise_b = *noise_b;
    if (cap) cfg.piece_cap = *cap;
    cfg.seed = seed;
    cfg.jobs = jobs;

    tw_train_result* raw = nullptr;
    const tw_status st = tw_train(&cfg, &g, set.c_str(), &raw);
    if (st == TW_ERR_INVALID_ARGUMENT) throw UsageFailure(tw_last_error());
    check(st, "training");
    TrainPtr result(raw);
    tw_policy* praw = nullptr;
    check(tw_train_result_policy(result.get(), &praw), "best policy");
    PolicyPtr best(praw);

    const json m = manifest("train", {{"game", game_json(g)},
                                      {"set", set},
                                      {"population", cfg.population},
                                      {"elite", cfg.elite},
                                      {"generations", cfg.generations},
                                      {"games_per_candidate", cfg.games_per_candidate},
                                      {"initial_std", cfg.initial_std},
                                      {"noise_a", cfg.noise_a},
                                      {"noise_b", cfg.noise_b},
                                      {"cap", cfg.piece_cap},
                                      {"seed", seed}});
    const std::string notes = "cross-entropy, best of " + std::to_string(cfg.generations) +
                              " generations, score " +
                              fmt(tw_train_result_best_score(result.get()));
    check(tw_policy_save(best.get(), out.c_str(), utc_now().c_str(), notes.c_str(),
                         m.dump().c_str()),
          "saving policy");
    if (!log.empty()) check(tw_train_result_write_log(result.get(), log.c_str()), "writing log");
    std::cout << "best_score=" << fmt(tw_train_result_best_score(result.get()))
              << " generations=" << tw_train_result_generations(result.get()) << '\n';
  }
};

// ---- filter-stats ------------------------------------------------------------

struct FilterCmd {
  std::string policy = "dellacherie";
  size_t games = 10;
  uint64_t seed = 0;
  int64_t cap = 1000;
  int jobs = default_jobs();
  bool standardize = false;
  std::string out;
  GameOptions game;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand(
        "filter-stats", "Count placements surviving simple and cumulative dominance");
    app->add_option("--policy", policy, "Built-in name or policy file")->capture_default_str();
    app->add_option("--games", games, "Number of games")->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--cap", cap, "Piece cap per game")->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();
    app->add_flag("--standardize", standardize, "z-score features per decision");
    app->add_option("--out", out, "JSON-lines report");
    game.add_to(app, "10x20");
    app->callback([this] { run(); });
  }

  void run() {
    if (games < 1) throw UsageFailure("--games must be >= 1");
    if (cap < 1) throw UsageFailure("--cap must be >= 1");
    const tw_game_config cfg = game.resolve("10x20");
    PolicyPtr p = load_policy(policy);
    tw_filter_report* raw = nullptr;
    check(tw_filter_stats(p.get(), &cfg, games, seed, cap, jobs, standardize ? 1 : 0, &raw),
          "filter stats");
    FilterPtr report(raw);
    tw_filter_summary s;
    check(tw_filter_report_summary(report.get(), &s), "summary");
    if (!out.empty()) {
      const json m = manifest("filter-stats", {{"game", game_json(cfg)},
                                               {"policy", policy_json(p.get())},
                                               {"seed", seed},
                                               {"games", games},
                                               {"cap", cap},
                                               {"standardize", standardize}});
      check(tw_filter_report_write(report.get(), out.c_str(), m.dump().c_str()),
            "writing report");
    }
    std::cout << "decisions=" << s.decisions << " median_raw=" << fmt(s.median_raw)
              << " median_simple=" << fmt(s.median_simple)
              << " median_cumulative=" << fmt(s.median_cumulative)
              << " nesting_holds=" << s.nesting_holds << '\n';
  }
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) g_argv.emplace_back(argv[i]);

  CLI::App app{"tetrisw: Tetris afterstate simulator, feature sets, linear policies, "
               "cross-entropy training and dominance filtering"};
  app.set_version_flag("--version", std::string(tw_version()));
  app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
  app.require_subcommand(1);

  EnumerateCmd enumerate;
  FeaturesCmd features;
  PlayCmd play;
  BenchCmd bench;
  TrainCmd train;
  FilterCmd filter;
  enumerate.attach(app);
  features.attach(app);
  play.attach(app);
  bench.attach(app);
  train.attach(app);
  filter.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
