// SPDX-License-Identifier: Apache-2.0
#include "prefq/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <thread>

#include "prefq/mucalc.hpp"
#include "prefq/translate.hpp"

namespace prefq {

namespace {

struct WorkItem {
  std::size_t cfg_idx;
  int replicate;
  std::size_t first_row;  // rows for this instance are contiguous
};

std::string config_label(const GraphGenConfig& cfg) {
  return std::to_string(cfg.n_stakeholders) + "," +
         std::to_string(cfg.n_outcomes) + "," +
         std::to_string(cfg.max_edges_per_stakeholder);
}

void run_instance(const BenchOptions& opts, const WorkItem& item,
                  std::vector<BenchRun>& rows) {
  GraphGenConfig cfg = opts.configs[item.cfg_idx];
  cfg.seed = opts.base_seed + 1000003ULL * item.cfg_idx +
             static_cast<std::uint64_t>(item.replicate);
  PreferenceGraph g = gen_graph(cfg);

  std::size_t row = item.first_row;
  for (std::size_t qi = 0; qi < opts.queries.size(); ++qi) {
    QueryPtr q = parse_query(opts.queries[qi], &g.schema(), &g.stakeholders());
    for (SemanticsMode mode : opts.modes) {
      BenchRun& r = rows[row++];
      r.config = config_label(cfg);
      r.seed = cfg.seed;
      r.query_id = "q" + std::to_string(qi);
      r.mode = to_string(mode);

      EngineOptions eopts;
      if (opts.timeout_ms > 0)
        eopts.deadline = Deadline::after_ms(opts.timeout_ms);
      auto start = std::chrono::steady_clock::now();
      try {
        Translation t = translate(*q, mode);
        LocalEvaluator local(t.formula, g, eopts);
        std::uint64_t size = 0;
        for (std::uint64_t n = 0; n < g.outcome_count(); ++n)
          if (local.check(static_cast<NodeId>(n))) ++size;
        r.result_size = size;
      } catch (const TimeoutError&) {
        r.timed_out = true;
      }
      r.time_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    }
  }
}

}  // namespace

std::vector<BenchRun> run_bench(const BenchOptions& opts) {
  if (opts.repeat < 0) throw SemanticError("repeat must not be negative");
  if (opts.repeat > 0 && (opts.queries.empty() || opts.modes.empty() ||
                          opts.configs.empty()))
    throw SemanticError("benchmark needs configs, queries and modes");

  std::size_t per_instance = opts.queries.size() * opts.modes.size();
  std::vector<WorkItem> items;
  std::size_t next_row = 0;
  for (std::size_t c = 0; c < opts.configs.size(); ++c)
    for (int rep = 0; rep < opts.repeat; ++rep) {
      items.push_back({c, rep, next_row});
      next_row += per_instance;
    }
  std::vector<BenchRun> rows(next_row);

  int threads = opts.threads;
  if (threads <= 1 || items.size() <= 1) {
    for (const WorkItem& item : items) run_instance(opts, item, rows);
    return rows;
  }
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= items.size() || failed.load()) return;
      try {
        run_instance(opts, items[i], rows);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(first_error);
  return rows;
}

std::string bench_csv(const std::vector<BenchRun>& rows) {
  std::string out = "config,seed,query_id,mode,engine,time_ms,result_size,status\n";
  char buf[32];
  for (const BenchRun& r : rows) {
    out += '"';
    out += r.config;
    out += "\",";
    out += std::to_string(r.seed);
    out += ',';
    out += r.query_id;
    out += ',';
    out += r.mode;
    out += ',';
    out += r.engine;
    out += ',';
    std::snprintf(buf, sizeof buf, "%.3f", r.time_ms);
    out += buf;
    out += ',';
    if (!r.timed_out) out += std::to_string(r.result_size);
    out += ',';
    out += r.timed_out ? "timeout" : "ok";
    out += '\n';
  }
  return out;
}

}  // namespace prefq
