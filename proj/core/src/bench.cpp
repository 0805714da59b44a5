#include "heq/bench.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "heq/csv.hpp"
#include "heq/numeric.hpp"

namespace heq {

Point sample_init(CounterRng& rng, std::size_t dim, std::int64_t lo, std::int64_t hi) {
  if (!(lo < hi) || lo < 1) throw Error(ErrorCode::InvalidArgument, "sample_init needs integers 1 <= lo < hi");
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "sample_init needs dim >= 1");
  Vector c(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = static_cast<double>(rng.uniform_int(lo, hi));
  return Point(std::move(c));
}

Point initial_point(const BenchConfig& cfg, std::size_t trial) {
  if (cfg.init.mode == InitSpec::Mode::Fixed) {
    Vector c(static_cast<Eigen::Index>(cfg.init.point.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = cfg.init.point[static_cast<std::size_t>(i)];
    return cfg.manifold().point(std::move(c));
  }
  CounterRng rng(cfg.seed ^ static_cast<std::uint64_t>(trial));
  return sample_init(rng, cfg.dimension, cfg.init.lo, cfg.init.hi);
}

SolveResult run_single(const BenchConfig& cfg, Method method, double lambda, std::size_t trial,
                       bool record_trace) {
  const auto f = cfg.make_bifunction();
  const auto m = cfg.manifold();
  return solve(method, f, m, initial_point(cfg, trial), StepSchedule::constant(lambda),
               cfg.solver_config(record_trace));
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  CompensatedSum s;
  for (double x : v) s += x;
  return s.value() / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean(v);
  CompensatedSum s;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s.value() / static_cast<double>(v.size() - 1));
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials) {
  std::vector<SummaryRow> out;
  std::size_t i = 0;
  while (i < trials.size()) {
    std::size_t j = i;
    std::vector<double> iters, times;
    while (j < trials.size() && trials[j].method == trials[i].method && trials[j].lambda == trials[i].lambda) {
      iters.push_back(static_cast<double>(trials[j].iterations));
      times.push_back(trials[j].time_s);
      ++j;
    }
    SummaryRow row;
    row.method = trials[i].method;
    row.lambda = trials[i].lambda;
    row.trials = j - i;
    row.mean_iter = mean(iters);
    row.std_iter = sample_stddev(iters);
    row.mean_time_s = mean(times);
    row.std_time_s = sample_stddev(times);
    out.push_back(row);
    i = j;
  }
  return out;
}

BenchResult run_bench(const BenchConfig& cfg) {
  cfg.validate();
  const auto f = cfg.make_bifunction();
  const auto m = cfg.manifold();
  const SolverConfig scfg = cfg.solver_config(false);

  std::vector<Point> inits;
  inits.reserve(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) inits.push_back(initial_point(cfg, t));

  const std::size_t per_method = cfg.lambda_grid.size() * cfg.trials;
  const std::size_t total = cfg.methods.size() * per_method;
  BenchResult result;
  result.trials.resize(total);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(total);
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t mi = k / per_method;
      const std::size_t li = (k % per_method) / cfg.trials;
      const std::size_t t = k % cfg.trials;
      TrialRecord& rec = result.trials[k];
      rec.method = cfg.methods[mi];
      rec.lambda = cfg.lambda_grid[li];
      rec.trial = t;
      try {
        const auto res = solve(rec.method, f, m, inits[t], StepSchedule::constant(rec.lambda), scfg);
        rec.iterations = res.trace.iterations();
        rec.status = res.trace.status;
        rec.time_s = res.trace.elapsed_s();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.threads, total));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.summary = summarize(result.trials);
  return result;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "method,lambda,mean_iter,std_iter,mean_time_s,std_time_s\n";
  for (const auto& r : rows) {
    os << to_string(r.method) << ',' << format_double(r.lambda) << ',' << format_double(r.mean_iter) << ','
       << format_double(r.std_iter) << ',' << format_double(r.mean_time_s) << ','
       << format_double(r.std_time_s) << '\n';
  }
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& rows) {
  os << "method,lambda,trial,iterations,status,time_s\n";
  for (const auto& r : rows) {
    os << to_string(r.method) << ',' << format_double(r.lambda) << ',' << r.trial << ',' << r.iterations << ','
       << to_string(r.status) << ',' << format_double(r.time_s) << '\n';
  }
}

}  // namespace heq
