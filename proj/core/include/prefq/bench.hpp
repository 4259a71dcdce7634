// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prefq/gen.hpp"
#include "prefq/query.hpp"

namespace prefq {

// One benchmark cell: a seeded random graph, one query, one mode, evaluated
// with the on-the-fly engine over every outcome.
struct BenchRun {
  std::string config;    // "stakeholders,outcomes,max_edges"
  std::uint64_t seed = 0;
  std::string query_id;  // q0, q1, ... in input order
  std::string mode;
  std::string engine = "mc-local";
  bool timed_out = false;
  double time_ms = 0;
  std::uint64_t result_size = 0;  // meaningless when timed out
};

struct BenchOptions {
  std::vector<GraphGenConfig> configs;  // seed fields ignored, derived below
  std::vector<std::string> queries;
  std::vector<SemanticsMode> modes;
  int repeat = 1;                  // replicate instances per config
  std::uint64_t base_seed = 0;
  std::int64_t timeout_ms = 120000;  // per cell; <= 0 disables
  int threads = 1;
};

// Rows come back in deterministic order (config, replicate, query, mode)
// regardless of thread count: replicates are partitioned over workers and
// each worker owns its instance. The instance seed is
// base_seed + 1000003 * config_index + replicate, so any cell can be re-run
// in isolation. A cell that exceeds the timeout becomes a timed_out row.
std::vector<BenchRun> run_bench(const BenchOptions& opts);

// Header always present, one line per row, config cell quoted. Timed-out
// cells leave result_size empty and set status to "timeout".
std::string bench_csv(const std::vector<BenchRun>& rows);

}  // namespace prefq
