#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tetrisw {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json policy_to_json(const PolicyFile& file) {
  json doc{{"name", file.policy.name},
           {"feature_set", feature_set_name(file.policy.set)},
           {"weights", file.policy.weights},
           {"created", file.created},
           {"notes", file.notes}};
  if (!file.manifest.is_null()) doc["manifest"] = file.manifest;
  return doc;
}

PolicyFile policy_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("policy must be an object");
  PolicyFile f;
  try {
    const auto set_name = doc.at("feature_set").get<std::string>();
    const auto set = feature_set_from_name(set_name);
    if (!set) throw std::invalid_argument("unknown feature set '" + set_name + "'");
    f.policy.set = *set;
    f.policy.name = doc.value("name", std::string("unnamed"));
    f.policy.weights = doc.at("weights").get<std::vector<double>>();
    f.created = doc.value("created", std::string());
    f.notes = doc.value("notes", std::string());
    if (doc.contains("manifest")) f.manifest = doc.at("manifest");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed policy: ") + e.what());
  }
  for (double w : f.policy.weights)
    if (!std::isfinite(w)) throw std::invalid_argument("policy weight is not finite");
  return f;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

PolicyFile load_policy(const std::string& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
  return policy_from_json(doc);
}

void save_policy(const PolicyFile& file, const std::string& path) {
  write_text_file(path, policy_to_json(file).dump(2) + "\n");
}

LinearPolicy resolve_policy(const std::string& name_or_path) {
  if (auto p = builtin_policy(name_or_path)) return *p;
  return load_policy(name_or_path).policy;
}

json game_config_to_json(const GameConfig& game) {
  return json{{"width", game.width},
              {"height", game.height},
              {"scoring", game.scoring},
              {"game_over", game_over_name(game.game_over)},
              {"piece_rule", game.piece_rule == PieceRule::kUniformIid
                                 ? "uniform-iid"
                                 : "alternating-sz"}};
}

std::string bench_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "seed,lines,pieces,truncated,millis\n";
  char millis[32];
  for (const auto& e : report.episodes) {
    std::snprintf(millis, sizeof millis, "%.3f", e.millis);
    out << e.seed << ',' << e.lines << ',' << e.pieces << ','
        << (e.truncated ? 1 : 0) << ',' << millis << '\n';
  }
  return out.str();
}

json bench_summary(const BenchReport& report) {
  const Summary& s = report.lines;
  std::vector<std::uint64_t> seeds;
  std::size_t truncated = 0;
  for (const auto& e : report.episodes) {
    seeds.push_back(e.seed);
    truncated += e.truncated ? 1 : 0;
  }
  return json{{"games", s.count},
              {"lines",
               {{"mean", s.mean},
                {"median", s.median},
                {"std", s.std},
                {"min", s.min},
                {"max", s.max},
                {"ci95", {s.ci_low, s.ci_high}}}},
              {"total_pieces", report.total_pieces},
              {"truncated_games", truncated},
              {"seeds", seeds},
              {"wall_ms", report.wall_ms},
              {"placements_per_second", report.placements_per_second}};
}

std::string train_log_csv(const TrainResult& result,
                          const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  out << "generation,mean_elite_score,best_score,running_best,noise";
  for (const auto& n : feature_names) out << ",mean_" << n;
  for (const auto& n : feature_names) out << ",std_" << n;
  out << ",millis\n";
  char millis[32];
  for (const auto& r : result.log) {
    out << r.generation << ',' << format_double(r.mean_elite_score) << ','
        << format_double(r.best_score) << ',' << format_double(r.running_best)
        << ',' << format_double(r.noise);
    for (double m : r.mean) out << ',' << format_double(m);
    for (double s : r.std) out << ',' << format_double(s);
    std::snprintf(millis, sizeof millis, "%.3f", r.millis);
    out << ',' << millis << '\n';
  }
  return out.str();
}

std::string filter_report_jsonl(const FilterReport& report, const json& manifest) {
  std::ostringstream out;
  out << json{{"type", "manifest"}, {"manifest", manifest}}.dump() << '\n';
  for (const auto& r : report.records) {
    out << json{{"type", "decision"},
                {"game", r.game},
                {"step", r.step},
                {"piece", std::string(1, piece_char(r.piece))},
                {"raw", r.raw},
                {"simple", r.simple},
                {"cumulative", r.cumulative}}
               .dump()
        << '\n';
  }
  out << json{{"type", "summary"},
              {"decisions", report.records.size()},
              {"median_raw", report.median_raw},
              {"median_simple", report.median_simple},
              {"median_cumulative", report.median_cumulative},
              {"nesting_holds", report.nesting_holds}}
             .dump()
      << '\n';
  return out.str();
}

}  // namespace tetrisw
