#pragma once
// Experiment driver: configuration, sharded execution and JSON/CSV reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace bkgr {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
  std::string experiment;
  int p = 5, k = 1, e = 1, f = 1, h = 2, d = 3;
  std::vector<int> mu;               // flattened triples, one per embedding
  std::vector<std::int64_t> c;       // c(u) coefficients over F_p, shared by all embeddings
  std::vector<std::uint32_t> q;      // field sizes; empty means the experiment default
  double budget = 2e8;               // max enumerated tuples
  std::uint64_t seed = 0x5eed0fb1cULL;
  int shards = 1;
  int threads = 0;                   // 0 keeps the OpenMP default
  int samples = 0;                   // 0 means the experiment default
  int emax = 40;
  int n = 2;                         // rank for chars-span / orbit-count
  int rsmax = 4;                     // r + s range of dimpoly-oracle
  std::string output;                // JSON path; empty means stdout
  std::string csv;                   // CSV path; empty derives from output

  // Throws ConfigError on an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);
  // Throws ConfigError when the configuration cannot run.
  void validate() const;
  nlohmann::ordered_json echo() const;
};

// key = value lines; '#' starts a comment.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

struct QCount {
  std::uint32_t q = 0;
  std::uint64_t count = 0;  // meaningful when exact
  bool exact = true;
  double estimate = 0;      // sampled mean when not exact
  double radius = 0;
};

struct Report {
  std::string experiment;
  nlohmann::ordered_json params;
  std::vector<QCount> q_counts;
  std::optional<double> dim_estimate;
  std::optional<std::int64_t> bound;
  std::vector<std::pair<std::string, bool>> checks;  // named invariants, in order
  bool pass = true;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  double wall_seconds = 0;
  std::string timestamp;

  void check(const std::string& name, bool ok);
  // Everything except the "timing" member is deterministic.
  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

// 64-bit seed for work item i, independent of how items are sharded.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i);

// Runs cfg.experiment. Throws ConfigError for invalid configurations.
Report run(const ExperimentConfig& cfg);

// Writes JSON (and the CSV mirror when an output path is set); returns the
// exit status: 0 pass, 1 invariant failure.
int write_report(const Report& r, const ExperimentConfig& cfg);

}  // namespace bkgr
