#include "heq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "heq/bench.hpp"
#include "heq/busemann.hpp"
#include "heq/csv.hpp"
#include "heq/diagnostics.hpp"
#include "heq/equilibrium.hpp"

namespace heq {

bool VerifyReport::passed() const { return hard_failures() == 0; }

std::size_t VerifyReport::hard_failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.hard && !c.passed; }));
}

namespace {

constexpr std::size_t kDims[] = {1, 2, 3, 10};

/// Tracks max(error / allowed) and the largest raw error.
struct Worst {
  double ratio = 0.0;
  double raw = 0.0;

  void add(double error, double allowed) {
    raw = std::max(raw, error);
    ratio = std::max(ratio, error / allowed);
    if (std::isnan(error)) ratio = std::numeric_limits<double>::infinity();
  }
};

CheckResult ratio_check(std::string name, const Worst& w, std::size_t cases) {
  CheckResult c;
  c.name = std::move(name);
  c.value = w.ratio;
  c.threshold = 1.0;
  c.passed = w.ratio <= 1.0;
  std::ostringstream os;
  os << "cases=" << cases << " max_error=" << format_double(w.raw);
  c.detail = os.str();
  return c;
}

std::string dim_suffix(std::size_t n) { return "[N=" + std::to_string(n) + "]"; }

}  // namespace

std::vector<CheckResult> geometry_suite(CounterRng& rng, std::size_t samples) {
  std::vector<CheckResult> out;
  for (std::size_t n : kDims) {
    const auto m = Manifold::log_orthant(n);
    const auto euclid = Manifold::euclidean(n);
    const auto sample = chart_box_sampler(m, -4.0, 4.0);
    Worst roundtrip, norm_consistency, cosine_ineq, cosine_eq, isometry;
    for (std::size_t k = 0; k < samples; ++k) {
      const Point x = sample(rng), y = sample(rng), z = sample(rng);
      const double dxy = dist(m, x, y);
      const Tangent v = log_map(m, x, y);
      roundtrip.add(dist(m, exp_map(m, v), y), 1e-10 * (1.0 + dxy));

      const double d2 = dxy * dxy;
      norm_consistency.add(std::abs(inner(m, x, v.vec(), v.vec()) - d2), 1e-10 * d2 + 1e-300);

      const double lhs = dist_sq(m, x, y) + dist_sq(m, y, z) - dist_sq(m, z, x);
      const double rhs = 2.0 * inner(m, y, log_map(m, y, x).vec(), log_map(m, y, z).vec());
      cosine_ineq.add(std::max(0.0, lhs - rhs), 1e-9);
      const double scale = 1.0 + dist_sq(m, x, y) + dist_sq(m, y, z) + dist_sq(m, z, x);
      cosine_eq.add(std::abs(lhs - rhs), 1e-10 * scale);

      const double flat = dist(euclid, Point(m.to_chart(x)), Point(m.to_chart(y)));
      isometry.add(std::abs(dxy - flat), 1e-12 * flat + 1e-14);
    }
    out.push_back(ratio_check("geometry.exp_log_roundtrip" + dim_suffix(n), roundtrip, samples));
    out.push_back(ratio_check("geometry.norm_consistency" + dim_suffix(n), norm_consistency, samples));
    out.push_back(ratio_check("geometry.law_of_cosines_inequality" + dim_suffix(n), cosine_ineq, samples));
    out.push_back(ratio_check("geometry.law_of_cosines_equality" + dim_suffix(n), cosine_eq, samples));
    out.push_back(ratio_check("geometry.log_isometry" + dim_suffix(n), isometry, samples));
  }
  return out;
}

std::vector<CheckResult> busemann_suite(CounterRng& rng, std::size_t samples) {
  std::vector<CheckResult> out;
  constexpr double kTimes[] = {10.0, 100.0, 1e4};
  for (std::size_t n : kDims) {
    const auto m = Manifold::log_orthant(n);
    const auto sample = chart_box_sampler(m, -3.0, 3.0);
    Worst identity, finite_t, monotone, lipschitz, normalization;
    double max_identity_dev = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
      const Point z = sample(rng), x = sample(rng), y = sample(rng);
      const double dzx = dist(m, z, x);
      const double dzy = dist(m, z, y);
      const double dev = std::abs(busemann_pairing(m, z, x, y) - busemann_pairing_bound(m, z, x, y));
      max_identity_dev = std::max(max_identity_dev, dev);
      identity.add(dev, 1e-9 * (1.0 + dzx * dzy));

      const GeodesicRay ray(m, z, x);
      const double closed = busemann_closed(ray, y);
      double prev = std::numeric_limits<double>::infinity();
      for (double t : kTimes) {
        const double approx = busemann_finite_t(ray, y, t);
        finite_t.add(std::abs(approx - closed), dzy * dzy / (2.0 * t) + 1e-9);
        monotone.add(std::max(0.0, approx - prev), 1e-9);
        prev = approx;
      }

      const Point y2 = sample(rng);
      lipschitz.add(std::max(0.0, std::abs(closed - busemann_closed(ray, y2)) - dist(m, y, y2)), 1e-10);

      const double t = 3.0 * rng.uniform01();
      normalization.add(std::abs(busemann_closed(ray, ray.at(t)) + t), 1e-10);
    }
    auto id = ratio_check("busemann.zero_curvature_identity" + dim_suffix(n), identity, samples);
    id.detail += " max_deviation=" + format_double(max_identity_dev);
    out.push_back(std::move(id));
    out.push_back(ratio_check("busemann.finite_t_bound" + dim_suffix(n), finite_t, samples));
    out.push_back(ratio_check("busemann.finite_t_monotone" + dim_suffix(n), monotone, samples));
    out.push_back(ratio_check("busemann.lipschitz" + dim_suffix(n), lipschitz, samples));
    out.push_back(ratio_check("busemann.ray_normalization" + dim_suffix(n), normalization, samples));
  }
  return out;
}

std::vector<CheckResult> equilibrium_suite(const BenchConfig& cfg, CounterRng& rng, std::size_t samples) {
  std::vector<CheckResult> out;
  const auto f = cfg.make_bifunction();
  const Manifold& m = f.manifold();
  const auto sample = chart_box_sampler(m, -3.0, 3.0);

  {
    const auto probe = probe_monotone(f, sample, rng, samples);
    CheckResult c;
    c.name = "equilibrium.monotone_probe";
    c.value = probe.max_value;
    c.threshold = probe.tolerance;
    c.passed = probe.passed;
    c.detail = "max F(x,y)+F(y,x) over " + std::to_string(probe.trials) + " pairs";
    out.push_back(std::move(c));
  }
  if (const auto beta = f.strong_monotonicity_modulus()) {
    const auto probe = probe_strong_pseudomonotone(f, *beta, sample, rng, samples);
    CheckResult c;
    c.name = "equilibrium.strong_pseudomonotone_probe";
    c.value = probe.max_value;
    c.threshold = probe.tolerance;
    c.passed = probe.passed;
    c.detail = "beta=" + format_double(*beta) + " considered=" + std::to_string(probe.considered);
    out.push_back(std::move(c));
  }

  const std::size_t per_lambda = std::max<std::size_t>(1, samples / (10 * cfg.lambda_grid.size()));
  Worst vi_busemann, vi_distsq, prox;
  std::size_t mismatches = 0, cases = 0;
  double literal_min = std::numeric_limits<double>::infinity();
  std::string failure;
  try {
    for (double lambda : cfg.lambda_grid) {
      const Resolvent jb(f, lambda, Regularizer::Busemann);
      const Resolvent jd(f, lambda, Regularizer::DistanceSquared);
      for (std::size_t k = 0; k < per_lambda; ++k) {
        const Point x = sample(rng);
        const Point zb = jb(x);
        const Point zd = jd(x);
        if (!(zd == resolvent_busemann(f, lambda / 2.0, x))) ++mismatches;
        const Point anchor = sample(rng);
        const Point xp = prox_step(f, lambda, x, anchor);
        for (int j = 0; j < 10; ++j) {
          const Point y = sample(rng);
          const double scale = 1.0 + m.to_chart(x).norm() * m.to_chart(y).norm();
          vi_busemann.add(std::max(0.0, -busemann_resolvent_residual(f, lambda, x, zb, y)), 1e-9 * scale);
          vi_distsq.add(std::max(0.0, -distsq_resolvent_residual(f, lambda, x, zd, y)), 1e-9 * scale);
          prox.add(std::max(0.0, -prox_residual(f, lambda, x, anchor, xp, y)), 1e-9 * scale);
          ++cases;
          if (cfg.variant == ResolventVariant::PaperLiteralEx51) {
            const Point zl = resolvent_busemann(f, lambda, x, ResolventVariant::PaperLiteralEx51);
            literal_min = std::min(literal_min, busemann_resolvent_residual(f, lambda, x, zl, y));
          }
        }
      }
    }
  } catch (const Error& e) {
    failure = e.what();
  }
  if (!failure.empty()) {
    CheckResult c;
    c.name = "equilibrium.resolvent_evaluation";
    c.passed = false;
    c.value = std::numeric_limits<double>::infinity();
    c.detail = failure;
    out.push_back(std::move(c));
    return out;
  }
  out.push_back(ratio_check("equilibrium.busemann_resolvent_residual", vi_busemann, cases));
  out.push_back(ratio_check("equilibrium.distsq_resolvent_residual", vi_distsq, cases));
  out.push_back(ratio_check("equilibrium.prox_optimality", prox, cases));
  {
    CheckResult c;
    c.name = "equilibrium.half_lambda_identity";
    c.value = static_cast<double>(mismatches);
    c.threshold = 0.0;
    c.passed = mismatches == 0;
    c.detail = "bitwise comparisons=" + std::to_string(cases / 10);
    out.push_back(std::move(c));
  }
  if (cfg.variant == ResolventVariant::PaperLiteralEx51) {
    CheckResult c;
    c.name = "equilibrium.paper_literal_resolvent_residual";
    c.hard = false;
    c.value = literal_min;
    c.threshold = -1e-9;
    c.passed = literal_min >= -1e-9;
    c.detail = "literal example51 formula does not satisfy the resolvent inequality; its fixed set is the plane x1 = x2 x3";
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CheckResult> diagnostics_suite(const BenchConfig& cfg) {
  std::vector<CheckResult> out;
  const auto f = cfg.make_bifunction();
  const Manifold m = f.manifold();
  const SolutionRef sol{m.point(Vector::Ones(static_cast<Eigen::Index>(m.dim()))), f.strong_monotonicity_modulus()};

  SolverConfig scfg = cfg.solver_config(true);
  scfg.variant = ResolventVariant::Characterization;
  scfg.tol = std::max(cfg.tol, 1e-12);
  scfg.max_iter = std::min<std::size_t>(cfg.max_iter, 20000);

  const std::vector<double> lambdas = {cfg.lambda_grid.front(), cfg.lambda_grid.back()};
  const std::size_t trials = std::min<std::size_t>(cfg.trials, 3);

  double fejer_worst = -std::numeric_limits<double>::infinity();
  bool fejer_ok = true, bound_eff_ok = true, bound_nom_ok = true, rate_ok = true;
  double bound_eff_slack = std::numeric_limits<double>::infinity();
  double bound_nom_slack = std::numeric_limits<double>::infinity();
  double rate_excess = 0.0;
  std::size_t runs = 0;
  std::string failure;
  try {
    for (Method method : cfg.methods) {
      for (double lambda : lambdas) {
        for (std::size_t t = 0; t < trials; ++t) {
          const auto sched = StepSchedule::constant(lambda);
          const auto res = solve(method, f, m, initial_point(cfg, t), sched, scfg);
          ++runs;
          const auto fr = fejer_report(m, res.trace, sol);
          if (fr.verdict == Verdict::Violated) fejer_ok = false;
          if (!fr.residuals.empty()) fejer_worst = std::max(fejer_worst, fr.threshold - fr.min_residual);
          if (sol.beta) {
            const auto br = error_bound_report(m, res.trace, sol);
            bound_eff_ok = bound_eff_ok && br.effective != Verdict::Violated;
            bound_nom_ok = bound_nom_ok && br.nominal != Verdict::Violated;
            bound_eff_slack = std::min(bound_eff_slack, br.worst_slack_effective);
            bound_nom_slack = std::min(bound_nom_slack, br.worst_slack_nominal);
            const auto rr = rlinear_report(m, res.trace, sol, sched);
            rate_ok = rate_ok && rr.verdict != Verdict::Violated;
            rate_excess = std::max(rate_excess, rr.max_excess);
          }
        }
      }
    }
  } catch (const Error& e) {
    failure = e.what();
  }
  if (!failure.empty()) {
    CheckResult c;
    c.name = "diagnostics.solver_runs";
    c.passed = false;
    c.value = std::numeric_limits<double>::infinity();
    c.detail = failure;
    out.push_back(std::move(c));
    return out;
  }

  CheckResult fejer;
  fejer.name = "diagnostics.fejer_descent";
  fejer.passed = fejer_ok;
  fejer.value = fejer_worst;
  fejer.threshold = 0.0;
  fejer.detail = "runs=" + std::to_string(runs) + " value=max(threshold - min residual)";
  out.push_back(std::move(fejer));
  if (sol.beta) {
    CheckResult eff;
    eff.name = "diagnostics.error_bound_effective";
    eff.passed = bound_eff_ok;
    eff.value = bound_eff_slack;
    eff.threshold = -1e-9;
    eff.detail = "factor 1+1/(beta*mu), mu = lambda (REMB) or lambda/2 (REMD)";
    out.push_back(std::move(eff));

    CheckResult nom;
    nom.name = "diagnostics.error_bound_nominal";
    nom.hard = false;
    nom.passed = bound_nom_ok;
    nom.value = bound_nom_slack;
    nom.threshold = -1e-9;
    nom.detail = "factor 1+1/(beta*lambda) for both methods";
    out.push_back(std::move(nom));

    CheckResult rate;
    rate.name = "diagnostics.rlinear_envelope";
    rate.hard = false;
    rate.passed = rate_ok;
    rate.value = rate_excess;
    rate.threshold = 1e-12;
    rate.detail = "envelope d(x0,x*) r^n with r = sqrt(1 - min(1, 2 beta lambda~))";
    out.push_back(std::move(rate));
  }
  return out;
}

VerifyReport run_verify(const BenchConfig& cfg) {
  cfg.validate();
  VerifyReport report;
  CounterRng rng(cfg.seed);
  auto append = [&](std::vector<CheckResult> v) {
    for (auto& c : v) report.checks.push_back(std::move(c));
  };
  append(geometry_suite(rng, cfg.verify_samples));
  append(busemann_suite(rng, cfg.verify_samples));
  append(equilibrium_suite(cfg, rng, cfg.verify_samples));
  append(diagnostics_suite(cfg));
  return report;
}

void write_verify_report(std::ostream& os, const VerifyReport& report) {
  for (const auto& c : report.checks) {
    os << "check," << c.name << ',' << (c.hard ? "hard" : "soft") << ',' << (c.passed ? "pass" : "fail") << ','
       << format_double(c.value) << ',' << format_double(c.threshold) << ',' << c.detail << '\n';
  }
  os << "verify," << (report.passed() ? "pass" : "fail") << ',' << report.hard_failures() << '\n';
}

}  // namespace heq
