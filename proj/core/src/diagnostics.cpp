#include "heq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "heq/csv.hpp"
#include "heq/numeric.hpp"

namespace heq {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "not-applicable";
}

SolutionRef make_solution_ref(const LogAffineBifunction& f, Point x_star, std::optional<double> beta,
                              const PointSampler& sampler, CounterRng& rng, std::size_t samples) {
  f.manifold().require(x_star);
  if (beta && !(*beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  for (std::size_t k = 0; k < samples; ++k) {
    const Point y = sampler(rng);
    if (f(x_star, y) < -1e-12) {
      throw Error(ErrorCode::InvalidArgument, "x_star is not a solution: F(x_star, y) < 0 for a sampled y");
    }
  }
  return SolutionRef{std::move(x_star), beta};
}

namespace {

void require_points(const IterateTrace& trace) {
  if (!trace.rows.empty() && !trace.has_points()) {
    throw Error(ErrorCode::MissingData, "trace was recorded without x_n / y_n");
  }
}

}  // namespace

FejerReport fejer_report(const Manifold& m, const IterateTrace& trace, const SolutionRef& sol) {
  require_points(trace);
  FejerReport r;
  r.threshold = -1e-9 * (1.0 + dist_sq(m, trace.x0, sol.x_star));
  if (trace.rows.empty()) return r;

  r.residuals.reserve(trace.rows.size());
  r.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < trace.rows.size(); ++n) {
    const Point& xn = trace.x(n);
    const Point& xn1 = trace.x(n + 1);
    const Point& yn = trace.y(n);
    CompensatedSum s;
    s += dist_sq(m, xn, sol.x_star);
    s += -dist_sq(m, xn1, sol.x_star);
    s += -dist_sq(m, xn, yn);
    s += -dist_sq(m, xn1, yn);
    r.residuals.push_back(s.value());
    r.min_residual = std::min(r.min_residual, s.value());
  }
  r.verdict = r.min_residual >= r.threshold ? Verdict::Holds : Verdict::Violated;
  return r;
}

ErrorBoundReport error_bound_report(const Manifold& m, const IterateTrace& trace, const SolutionRef& sol) {
  if (!sol.beta) throw Error(ErrorCode::MissingData, "error bound check needs beta");
  require_points(trace);
  ErrorBoundReport r;
  if (trace.rows.empty()) return r;

  constexpr double kSlack = 1e-9;
  const double beta = *sol.beta;
  r.worst_slack_nominal = std::numeric_limits<double>::infinity();
  r.worst_slack_effective = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < trace.rows.size(); ++n) {
    const double lambda = trace.rows[n].lambda;
    const double mu = trace.method == Method::Remb ? lambda : lambda / 2.0;
    const double dyx = dist(m, trace.y(n), trace.x(n));
    ErrorBoundRow row;
    row.n = n;
    row.lhs = dist(m, trace.x(n), sol.x_star);
    row.rhs_nominal = (1.0 + 1.0 / (beta * lambda)) * dyx;
    row.rhs_effective = (1.0 + 1.0 / (beta * mu)) * dyx;
    r.worst_slack_nominal = std::min(r.worst_slack_nominal, row.rhs_nominal - row.lhs);
    r.worst_slack_effective = std::min(r.worst_slack_effective, row.rhs_effective - row.lhs);
    r.rows.push_back(row);
  }
  r.nominal = r.worst_slack_nominal >= -kSlack ? Verdict::Holds : Verdict::Violated;
  r.effective = r.worst_slack_effective >= -kSlack ? Verdict::Holds : Verdict::Violated;
  return r;
}

RLinearReport rlinear_report(const Manifold& m, const IterateTrace& trace, const SolutionRef& sol,
                             const StepSchedule& sched) {
  if (!sol.beta) throw Error(ErrorCode::MissingData, "rate check needs beta");
  if (trace.rows.empty()) throw Error(ErrorCode::MissingData, "rate check needs a non-empty trace");
  require_points(trace);

  RLinearReport r;
  const double beta = *sol.beta;
  r.rate_bound = std::sqrt(1.0 - std::min(1.0, 2.0 * beta * sched.lower_bound()));

  const std::size_t count = trace.rows.size() + 1;
  r.distances.reserve(count);
  r.envelope.reserve(count);
  for (std::size_t n = 0; n < count; ++n) r.distances.push_back(dist(m, trace.x(n), sol.x_star));
  const double d0 = r.distances.front();

  r.verdict = Verdict::Holds;
  double envelope = d0;
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) envelope *= r.rate_bound;
    r.envelope.push_back(envelope);
    const double excess = r.distances[n] - envelope;
    r.max_excess = std::max(r.max_excess, excess);
    if (excess > 1e-12 && r.verdict == Verdict::Holds) {
      r.verdict = Verdict::Violated;
      r.first_violation = n;
    }
  }

  // Least squares fit of ln d_n = a + b n over points above the round-off floor.
  const double floor = 1e-11 * std::max({1.0, d0, chart_scale(m, sol.x_star)});
  double sn = 0, sy = 0, snn = 0, sny = 0;
  std::size_t k = 0;
  for (std::size_t n = 0; n < count; ++n) {
    if (!(r.distances[n] > floor)) continue;
    const double t = static_cast<double>(n);
    const double v = std::log(r.distances[n]);
    sn += t;
    sy += v;
    snn += t * t;
    sny += t * v;
    ++k;
  }
  r.fitted_points = k;
  if (k >= 2) {
    const double kd = static_cast<double>(k);
    const double denom = kd * snn - sn * sn;
    r.empirical_rate = denom != 0.0 ? std::exp((kd * sny - sn * sy) / denom)
                                    : std::numeric_limits<double>::quiet_NaN();
  } else {
    r.empirical_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

void write_report_csv(std::ostream& os, const FejerReport& fejer, const ErrorBoundReport* bound,
                      const RLinearReport* rate) {
  os << "n,residual,bound_lhs,bound_rhs,envelope\n";
  for (std::size_t n = 0; n < fejer.residuals.size(); ++n) {
    os << n << ',' << format_double(fejer.residuals[n]) << ',';
    if (bound && n < bound->rows.size()) {
      os << format_double(bound->rows[n].lhs) << ',' << format_double(bound->rows[n].rhs_nominal);
    } else {
      os << ',';
    }
    os << ',';
    if (rate && n < rate->envelope.size()) os << format_double(rate->envelope[n]);
    os << '\n';
  }
  os << "summary,fejer=" << to_string(fejer.verdict) << ",min_residual=" << format_double(fejer.min_residual);
  if (bound) {
    os << ",error_bound_nominal=" << to_string(bound->nominal)
       << ",error_bound_effective=" << to_string(bound->effective);
  }
  if (rate) {
    os << ",rlinear=" << to_string(rate->verdict) << ",rate_bound=" << format_double(rate->rate_bound)
       << ",empirical_rate=" << format_double(rate->empirical_rate);
  }
  os << '\n';
}

}  // namespace heq
