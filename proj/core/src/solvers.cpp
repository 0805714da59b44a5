#include "heq/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "heq/csv.hpp"

namespace heq {

std::string_view to_string(Method m) { return m == Method::Remb ? "remb" : "remd"; }

Method parse_method(std::string_view s) {
  if (s == "remb" || s == "REMB") return Method::Remb;
  if (s == "remd" || s == "REMD") return Method::Remd;
  throw Error(ErrorCode::Config, "unknown method '" + std::string(s) + "' (expected remb | remd)");
}

std::string_view to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Converged: return "converged";
    case TerminalStatus::Stagnated: return "stagnated";
    case TerminalStatus::MaxIterReached: return "max_iter";
  }
  return "max_iter";
}

StepSchedule::StepSchedule(std::vector<double> values, double lower_bound)
    : values_(std::move(values)), lower_bound_(lower_bound) {
  if (values_.empty()) throw Error(ErrorCode::InvalidArgument, "step schedule needs at least one value");
  if (!(lower_bound_ > 0.0) || !std::isfinite(lower_bound_)) {
    throw Error(ErrorCode::InvalidArgument, "step schedule lower bound must be positive");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < lower_bound_) {
      throw Error(ErrorCode::InvalidArgument, "every lambda_n must be finite and >= the lower bound");
    }
  }
}

StepSchedule StepSchedule::constant(double lambda) { return StepSchedule({lambda}, lambda); }

StepSchedule StepSchedule::constant(double lambda, double lower_bound) {
  return StepSchedule({lambda}, lower_bound);
}

StepSchedule StepSchedule::sequence(std::vector<double> lambdas, double lower_bound) {
  return StepSchedule(std::move(lambdas), lower_bound);
}

std::size_t IterateTrace::iterations() const noexcept {
  if (status == TerminalStatus::MaxIterReached) return rows.size();
  return rows.empty() ? 0 : rows.size() - 1;
}

bool IterateTrace::has_points() const noexcept {
  return !rows.empty() && rows.front().x.has_value() && rows.front().y.has_value();
}

const Point& IterateTrace::x(std::size_t n) const {
  if (n == rows.size()) return solution;
  if (n > rows.size() || !rows[n].x) throw Error(ErrorCode::MissingData, "trace does not store x_n");
  return *rows[n].x;
}

const Point& IterateTrace::y(std::size_t n) const {
  if (n >= rows.size() || !rows[n].y) throw Error(ErrorCode::MissingData, "trace does not store y_n");
  return *rows[n].y;
}

namespace {

SolveResult run(Method method, const LogAffineBifunction& f, const Manifold& m, const Point& x0,
                const StepSchedule& sched, const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
  if (cfg.max_iter == 0) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (f.manifold() != m) throw Error(ErrorCode::DimensionMismatch, "bifunction and manifold disagree");
  m.require(x0);

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const Regularizer reg = method == Method::Remb ? Regularizer::Busemann : Regularizer::DistanceSquared;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  IterateTrace trace;
  trace.method = method;
  trace.variant = cfg.variant;
  trace.x0 = x0;

  std::optional<Resolvent> resolvent;
  Point x = x0;
  for (std::size_t n = 0; n < cfg.max_iter; ++n) {
    const double lambda = sched[n];
    if (!resolvent || resolvent->lambda() != lambda) resolvent.emplace(f, lambda, reg, cfg.variant);

    Point y = (*resolvent)(x);
    Point next = prox_step(f, lambda, x, y);

    TraceRow row;
    row.n = n;
    row.lambda = lambda;
    row.dxy = dist(m, x, y);
    row.er = dist(m, next, x);
    row.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
    const double er = row.er;
    const double floor = cfg.stall_factor * eps * std::max(1.0, chart_scale(m, x));
    if (cfg.record_trace) {
      row.x = std::move(x);
      row.y = std::move(y);
    }
    trace.rows.push_back(std::move(row));
    x = std::move(next);

    if (er <= cfg.tol) {
      trace.status = TerminalStatus::Converged;
      break;
    }
    if (cfg.stall_factor > 0.0 && er <= floor) {
      trace.status = TerminalStatus::Stagnated;
      break;
    }
  }
  trace.solution = x;
  return SolveResult{std::move(x), std::move(trace)};
}

}  // namespace

SolveResult solve_remb(const LogAffineBifunction& f, const Manifold& m, const Point& x0,
                       const StepSchedule& sched, const SolverConfig& cfg) {
  return run(Method::Remb, f, m, x0, sched, cfg);
}

SolveResult solve_remd(const LogAffineBifunction& f, const Manifold& m, const Point& x0,
                       const StepSchedule& sched, const SolverConfig& cfg) {
  return run(Method::Remd, f, m, x0, sched, cfg);
}

SolveResult solve(Method method, const LogAffineBifunction& f, const Manifold& m, const Point& x0,
                  const StepSchedule& sched, const SolverConfig& cfg) {
  return run(method, f, m, x0, sched, cfg);
}

std::size_t iteration_count_oracle(const LogAffineBifunction& f, Method method, double lambda,
                                   const Point& x0, double tol) {
  if (f.kind() != BifunctionKind::Example52) {
    throw Error(ErrorCode::InvalidArgument, "iteration_count_oracle is defined for example52 only");
  }
  if (!(lambda > 0.0) || !(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda and tol must be > 0");
  const double u0 = f.manifold().to_chart(x0).norm();
  if (u0 == 0.0) return 0;

  double q = 0.0;
  double rho = 0.0;
  if (method == Method::Remb) {
    q = 1.0 / (1.0 + lambda);
    rho = lambda / (1.0 + lambda);
  } else {
    q = std::abs((1.0 - lambda / 2.0) / (1.0 + lambda / 2.0));
    rho = lambda / (1.0 + lambda / 2.0);
  }
  const double e0 = rho * u0;
  if (e0 <= tol) return 0;
  if (q == 0.0) return 1;
  if (q >= 1.0) throw Error(ErrorCode::InvalidArgument, "recursion does not contract");

  const double estimate = std::ceil(std::log(e0 / tol) / -std::log(q));
  auto n = static_cast<std::size_t>(std::max(0.0, estimate));
  auto er = [&](std::size_t k) { return e0 * std::pow(q, static_cast<double>(k)); };
  while (n > 0 && er(n - 1) <= tol) --n;
  while (er(n) > tol) ++n;
  return n;
}

void write_trace_csv(std::ostream& os, const IterateTrace& trace) {
  os << "n,lambda,dxy,er,elapsed_s\n";
  for (const auto& r : trace.rows) {
    os << r.n << ',' << format_double(r.lambda) << ',' << format_double(r.dxy) << ','
       << format_double(r.er) << ',' << format_double(r.elapsed_s) << '\n';
  }
  os << "status," << to_string(trace.status) << ',' << trace.iterations() << '\n';
  os << "solution";
  const Vector& c = trace.solution.coords();
  for (Eigen::Index i = 0; i < c.size(); ++i) os << ',' << format_double(c(i));
  os << '\n';
}

}  // namespace heq
