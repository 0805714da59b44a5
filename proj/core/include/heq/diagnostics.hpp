#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "heq/equilibrium.hpp"
#include "heq/solvers.hpp"

namespace heq {

/// Three-way outcome of a theorem check. Violated is a finding about the
/// data, not an error.
enum class Verdict { Holds, Violated, NotApplicable };
std::string_view to_string(Verdict v);

/// A known solution x* of the equilibrium problem, and optionally the strong
/// pseudomonotonicity modulus beta.
struct SolutionRef {
  Point x_star;
  std::optional<double> beta;
};

/// Builds a SolutionRef after checking F(x*, y) >= -1e-12 on `samples` sampled
/// points y. Throws InvalidArgument if x* is not a solution or beta <= 0.
SolutionRef make_solution_ref(const LogAffineBifunction& f, Point x_star, std::optional<double> beta,
                              const PointSampler& sampler, CounterRng& rng, std::size_t samples = 1000);

/// Per-iteration residual of the descent inequality
///   r_n = d^2(x_n,x*) - d^2(x_{n+1},x*) - d^2(x_n,y_n) - d^2(x_{n+1},y_n).
struct FejerReport {
  std::vector<double> residuals;
  double min_residual = 0.0;
  /// -1e-9 * (1 + d^2(x_0, x*))
  double threshold = 0.0;
  Verdict verdict = Verdict::NotApplicable;
};

FejerReport fejer_report(const Manifold& m, const IterateTrace& trace, const SolutionRef& sol);

/// Error bound d(x_n, x*) <= (1 + 1/(beta * mu_n)) d(y_n, x_n), checked with
/// mu_n = lambda_n (nominal) and with mu_n the parameter of the equivalent
/// Busemann resolvent (effective: lambda_n for REMB, lambda_n / 2 for REMD).
struct ErrorBoundRow {
  std::size_t n = 0;
  double lhs = 0.0;
  double rhs_nominal = 0.0;
  double rhs_effective = 0.0;
};

struct ErrorBoundReport {
  std::vector<ErrorBoundRow> rows;
  /// min over n of rhs - lhs.
  double worst_slack_nominal = 0.0;
  double worst_slack_effective = 0.0;
  Verdict nominal = Verdict::NotApplicable;
  Verdict effective = Verdict::NotApplicable;
};

ErrorBoundReport error_bound_report(const Manifold& m, const IterateTrace& trace, const SolutionRef& sol);

/// Envelope d(x_n, x*) <= d(x_0, x*) r^n with r = sqrt(1 - min{1, 2 beta lambda~}),
/// plus the least-squares rate of ln d(x_n, x*) against n.
struct RLinearReport {
  double rate_bound = 0.0;
  std::vector<double> distances;
  std::vector<double> envelope;
  Verdict verdict = Verdict::NotApplicable;
  std::optional<std::size_t> first_violation;
  double max_excess = 0.0;
  /// exp(slope); NaN when fewer than two points lie above the noise floor.
  double empirical_rate = 0.0;
  std::size_t fitted_points = 0;
};

RLinearReport rlinear_report(const Manifold& m, const IterateTrace& trace, const SolutionRef& sol,
                             const StepSchedule& sched);

/// Report CSV: `n,residual,bound_lhs,bound_rhs,envelope`, then one `summary,...`
/// line. Missing reports leave their columns empty.
void write_report_csv(std::ostream& os, const FejerReport& fejer, const ErrorBoundReport* bound,
                      const RLinearReport* rate);

}  // namespace heq
