#pragma once

// Configurable battery of checks with a deterministic JSON report.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bjortho/report.hpp"
#include "bjortho/rng.hpp"

namespace bjortho {

struct SuiteCounts {
  int left = 50;              // random targets per spec, left-symmetry refutation
  int right = 25;             // random targets per spec, right-symmetry refutation
  int transfer_operators = 10;
  int transfer_trials = 100;
  int route_pairs = 200;      // per route spec
  int hilbert_matrices = 100;
  int hilbert_pairs = 10000;
  int construction = 6;       // rank-one targets per spec driving the P2 branch
};

struct SuiteConfig {
  std::vector<std::string> specs{"lp:1.5:2", "lp:3:2", "lp:2:3", "lp:3:3"};
  std::vector<std::string> route_specs{"lp:1.5:2", "lp:2:2", "lp:3:2", "lp:1.5:3", "lp:2:3", "lp:3:3"};
  std::vector<std::uint64_t> seeds{kDefaultMasterSeed};
  SuiteCounts counts;
  double tau_orth = kTauOrth;
  double backward_margin = 1e-5;
  /// Empty means all suites.
  std::vector<std::string> suites;
  std::string output;
  /// 0 means BJORTHO_THREADS or the hardware concurrency.
  int threads = 0;
  /// Wall times break byte-identical output, so they are opt-in.
  bool include_timings = false;

  /// Parses and validates a JSON config; unknown keys are rejected.
  static SuiteConfig from_json(const Json& j);
  Json to_json() const;
};

/// Names accepted in SuiteConfig::suites, in execution order.
const std::vector<std::string>& suite_names();

struct CheckRecord {
  std::string suite;
  std::string id;
  /// PASS, FAIL, INDETERMINATE or HYPOTHESIS_FAILED.
  std::string outcome;
  Json inputs;
  Json result;
  double seconds = 0.0;
};

struct SuiteSummary {
  int pass = 0;
  int fail = 0;
  int indeterminate = 0;
  int hypothesis_failed = 0;
};

struct RunReport {
  SuiteConfig config;
  std::vector<CheckRecord> records;
  SuiteSummary summary;
  /// Wall time per suite, in suite order.
  std::vector<std::pair<std::string, double>> suite_seconds;

  Json to_json() const;
  bool ok() const { return summary.fail == 0; }
};

/// Worker count: config.threads, else BJORTHO_THREADS, else hardware.
int resolve_threads(const SuiteConfig& config);

RunReport run_suite(const SuiteConfig& config);

SuiteSummary tally(const std::vector<CheckRecord>& records);

/// Stable 64-bit hash of a record id (FNV-1a), used for per-target seeds.
std::uint64_t id_hash(std::string_view id);

}  // namespace bjortho
