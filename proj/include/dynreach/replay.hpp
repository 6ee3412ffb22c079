#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dynreach/algebraic.hpp"
#include "dynreach/graph.hpp"

namespace dynreach {

enum class EngineKind { kTcInsert, kUndirected, kAlgebraic };

std::string to_string(EngineKind kind);
/// Accepts `tc-insert`, `undirected`, `algebraic`.
std::optional<EngineKind> parse_engine_kind(const std::string& name);

/// ceil((log2 n)^c).
std::size_t change_budget(std::size_t n, double c);
bool within_budget(std::size_t n, std::size_t change_size, double c);

struct ReplayOptions {
  EngineKind engine = EngineKind::kTcInsert;
  bool oracle_check = false;
  std::optional<double> budget_c;
  std::uint64_t seed = 0;
  AlgebraicOptions algebraic;
  /// Emit per-step elapsed time; off gives byte-reproducible reports.
  bool timing = true;
  /// All ordered pairs are queried up to this many nodes, a sample above.
  std::size_t full_query_limit = 64;
  std::size_t sampled_queries = 4096;
};

struct StepRecord {
  std::size_t step = 0;
  std::size_t inserted = 0;
  std::size_t deleted = 0;
  std::size_t affected = 0;
  std::size_t queries = 0;
  std::optional<std::uint64_t> elapsed_us;
  std::optional<bool> agrees;        // set when the oracle ran
  std::optional<bool> over_budget;   // set when a budget exponent was given
  std::optional<std::string> problem;
  std::vector<std::pair<std::string, std::string>> stats;
};

struct ReplayReport {
  std::vector<StepRecord> steps;
  std::size_t disagreements = 0;
  std::size_t over_budget = 0;

  bool pass() const { return disagreements == 0; }
};

/// Unsupported change kinds and engine/graph mismatches raise PreconditionError.
ReplayReport replay(const Graph& g, const std::vector<BulkChange>& script, const ReplayOptions& options);

/// One `step ...` line per step, then a `summary ...` line.
void write_report(std::ostream& out, const ReplayReport& report);

}  // namespace dynreach
