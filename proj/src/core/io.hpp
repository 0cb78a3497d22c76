#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bench.hpp"
#include "dominance.hpp"
#include "engine.hpp"
#include "optimize.hpp"
#include "policy.hpp"

namespace tetrisw {

// Failures reading or writing artifact files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolicyFile {
  LinearPolicy policy;
  std::string created;
  std::string notes;
  nlohmann::json manifest;  // null when absent
};

nlohmann::json policy_to_json(const PolicyFile& file);
// Throws std::invalid_argument on a malformed document.
PolicyFile policy_from_json(const nlohmann::json& doc);

PolicyFile load_policy(const std::string& path);
void save_policy(const PolicyFile& file, const std::string& path);

// A built-in name ("dellacherie") or a policy file path.
LinearPolicy resolve_policy(const std::string& name_or_path);

nlohmann::json game_config_to_json(const GameConfig& game);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Per-episode rows: seed,lines,pieces,truncated,millis.
std::string bench_csv(const BenchReport& report);
nlohmann::json bench_summary(const BenchReport& report);

// One row per generation: scores, noise, then mean_i and std_i per weight.
std::string train_log_csv(const TrainResult& result,
                          const std::vector<std::string>& feature_names);

// JSON lines: a manifest line, one line per decision, a closing summary line.
std::string filter_report_jsonl(const FilterReport& report,
                                const nlohmann::json& manifest);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace tetrisw
