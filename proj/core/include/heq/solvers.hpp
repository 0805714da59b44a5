#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "heq/equilibrium.hpp"
#include "heq/manifold.hpp"

namespace heq {

/// REMB uses the Busemann-regularized resolvent, REMD the squared-distance one.
enum class Method { Remb, Remd };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

/// Parameter sequence {lambda_n}. Past the end of an explicit sequence the
/// last value repeats, so limsup 1/lambda_n = 1/lambda_last.
class StepSchedule {
 public:
  static StepSchedule constant(double lambda);
  static StepSchedule constant(double lambda, double lower_bound);
  static StepSchedule sequence(std::vector<double> lambdas, double lower_bound);

  double operator[](std::size_t n) const noexcept {
    return n < values_.size() ? values_[n] : values_.back();
  }
  bool is_constant() const noexcept { return values_.size() == 1; }
  /// lambda~ with lambda_n >= lambda~ > 0 for all n.
  double lower_bound() const noexcept { return lower_bound_; }
  /// lambda in limsup 1/lambda_n >= 1/lambda.
  double limsup_param() const noexcept { return values_.back(); }

 private:
  StepSchedule(std::vector<double> values, double lower_bound);

  std::vector<double> values_;
  double lower_bound_;
};

struct SolverConfig {
  /// Stop once Er(n) = d(x_{n+1}, x_n) <= tol.
  double tol = 1e-8;
  std::size_t max_iter = 1'000'000;
  ResolventVariant variant = ResolventVariant::Characterization;
  /// Store x_n and y_n in every trace row.
  bool record_trace = true;
  /// Er(n) <= stall_factor * eps * max(1, |chart(x_n)|) ends the run as
  /// Stagnated: the step is below what the iterate's coordinates can resolve.
  /// Zero disables the check.
  double stall_factor = 4.0;
};

enum class TerminalStatus { Converged, Stagnated, MaxIterReached };
std::string_view to_string(TerminalStatus s);

struct TraceRow {
  std::size_t n = 0;
  double lambda = 0.0;
  /// d(x_n, y_n)
  double dxy = 0.0;
  /// Er(n) = d(x_{n+1}, x_n)
  double er = 0.0;
  /// Seconds since the start of the run, taken after x_{n+1} was computed.
  double elapsed_s = 0.0;
  std::optional<Point> x;
  std::optional<Point> y;
};

struct IterateTrace {
  Method method = Method::Remb;
  ResolventVariant variant = ResolventVariant::Characterization;
  TerminalStatus status = TerminalStatus::MaxIterReached;
  Point x0;
  /// Last computed iterate x_{n+1}.
  Point solution;
  std::vector<TraceRow> rows;

  /// Index of the row that met the stopping test, or the number of rows when
  /// max_iter was reached. A run started at a solution reports 0.
  std::size_t iterations() const noexcept;
  bool has_points() const noexcept;
  /// x_n for n in [0, rows.size()]; x_{rows.size()} is the solution.
  const Point& x(std::size_t n) const;
  const Point& y(std::size_t n) const;
  double elapsed_s() const noexcept { return rows.empty() ? 0.0 : rows.back().elapsed_s; }
};

struct SolveResult {
  Point solution;
  IterateTrace trace;
};

/// Algorithm REMB: y_n = J_{lambda_n}(x_n), x_{n+1} = prox_{lambda_n F(y_n, .)}(x_n).
SolveResult solve_remb(const LogAffineBifunction& f, const Manifold& m, const Point& x0,
                       const StepSchedule& sched, const SolverConfig& cfg);

/// Algorithm REMD: y_n from the squared-distance resolvent, same prox step.
SolveResult solve_remd(const LogAffineBifunction& f, const Manifold& m, const Point& x0,
                       const StepSchedule& sched, const SolverConfig& cfg);

SolveResult solve(Method method, const LogAffineBifunction& f, const Manifold& m, const Point& x0,
                  const StepSchedule& sched, const SolverConfig& cfg);

/// Analytic iteration count for example52 with a constant parameter.
///
/// In chart coordinates u_{n+1} = q u_n with q = 1/(1+lambda) (REMB) or
/// (1-lambda/2)/(1+lambda/2) (REMD), so Er(n) = rho |u_0| |q|^n with
/// rho = lambda/(1+lambda) or lambda/(1+lambda/2). Returns the smallest n with
/// Er(n) <= tol.
std::size_t iteration_count_oracle(const LogAffineBifunction& f, Method method, double lambda,
                                   const Point& x0, double tol);

/// Trace CSV: header `n,lambda,dxy,er,elapsed_s`, one row per iteration, then
/// `status,<status>,<iterations>` and `solution,<x_1>,...,<x_N>` records.
void write_trace_csv(std::ostream& os, const IterateTrace& trace);

}  // namespace heq
