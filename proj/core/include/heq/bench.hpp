#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "heq/config.hpp"
#include "heq/rng.hpp"
#include "heq/solvers.hpp"

namespace heq {

/// Each coordinate an independent uniform integer in [lo, hi]; needs
/// 1 <= lo < hi. Advances `rng`.
Point sample_init(CounterRng& rng, std::size_t dim, std::int64_t lo, std::int64_t hi);

/// Initial point of trial `trial`: the fixed point, or sample_init with a
/// generator seeded by seed XOR trial.
Point initial_point(const BenchConfig& cfg, std::size_t trial);

/// One solve of the configured problem.
SolveResult run_single(const BenchConfig& cfg, Method method, double lambda, std::size_t trial,
                       bool record_trace);

struct TrialRecord {
  Method method = Method::Remb;
  double lambda = 0.0;
  std::size_t trial = 0;
  std::size_t iterations = 0;
  TerminalStatus status = TerminalStatus::MaxIterReached;
  double time_s = 0.0;
};

struct SummaryRow {
  Method method = Method::Remb;
  double lambda = 0.0;
  std::size_t trials = 0;
  double mean_iter = 0.0;
  /// Sample standard deviation (n - 1); zero for a single trial.
  double std_iter = 0.0;
  double mean_time_s = 0.0;
  double std_time_s = 0.0;
};

struct BenchResult {
  /// Ordered by (method, lambda, trial) regardless of scheduling.
  std::vector<TrialRecord> trials;
  std::vector<SummaryRow> summary;
};

/// Runs every (method, lambda, trial) combination, on `cfg.threads` workers.
BenchResult run_bench(const BenchConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials);

/// `method,lambda,mean_iter,std_iter,mean_time_s,std_time_s`. The two time
/// columns are wall-clock and not reproducible.
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
/// `method,lambda,trial,iterations,status,time_s`.
void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& rows);

double mean(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);

}  // namespace heq
