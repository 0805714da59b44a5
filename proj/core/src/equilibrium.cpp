#include "heq/equilibrium.hpp"

#include <cmath>
#include <sstream>

#include "heq/busemann.hpp"

namespace heq {

std::string_view to_string(ResolventVariant v) {
  return v == ResolventVariant::Characterization ? "characterization" : "paper-literal";
}

std::string_view to_string(BifunctionKind k) {
  switch (k) {
    case BifunctionKind::Example51: return "example51";
    case BifunctionKind::Example52: return "example52";
    case BifunctionKind::Matrix: return "matrix";
  }
  return "matrix";
}

ResolventVariant parse_variant(std::string_view s) {
  if (s == "characterization") return ResolventVariant::Characterization;
  if (s == "paper-literal" || s == "paper_literal") return ResolventVariant::PaperLiteralEx51;
  throw Error(ErrorCode::Config, "unknown resolvent variant '" + std::string(s) +
                                     "' (expected characterization | paper-literal)");
}

Vector ShiftedSystem::solve(const Vector& rhs) const {
  return std::visit(
      [&](const auto& impl) -> Vector {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, Diagonal>) {
          return (rhs.array() * impl.inv_diag.array()).matrix();
        } else if constexpr (std::is_same_v<T, RankOne>) {
          return rhs - (impl.scale * impl.c.dot(rhs)) * impl.c;
        } else {
          return impl.lu.solve(rhs);
        }
      },
      impl_);
}

LogAffineBifunction::LogAffineBifunction(Manifold m, Matrix a, BifunctionKind kind, Structure s)
    : manifold_(m), a_(std::move(a)), kind_(kind), structure_(s) {
  const auto n = static_cast<Eigen::Index>(manifold_.dim());
  if (a_.rows() != n || a_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "bifunction matrix must be N x N for the manifold dimension");
  }
  if (!a_.allFinite()) throw Error(ErrorCode::InvalidArgument, "bifunction matrix has non-finite entries");
}

LogAffineBifunction LogAffineBifunction::rank_one(const Manifold& m, double alpha, Vector c) {
  Matrix a = alpha * c * c.transpose();
  LogAffineBifunction f(m, std::move(a), BifunctionKind::Matrix, Structure::RankOne);
  f.rank_one_c_ = std::move(c);
  f.rank_one_alpha_ = alpha;
  return f;
}

LogAffineBifunction LogAffineBifunction::example51() {
  Vector c(3);
  c << 1.0, 1.0, -1.0;
  auto f = rank_one(Manifold::log_orthant(3), 3.0, std::move(c));
  f.kind_ = BifunctionKind::Example51;
  return f;
}

LogAffineBifunction LogAffineBifunction::example52(std::size_t dim) {
  const auto m = Manifold::log_orthant(dim);
  const auto n = static_cast<Eigen::Index>(dim);
  return LogAffineBifunction(m, Matrix::Identity(n, n), BifunctionKind::Example52, Structure::Diagonal);
}

LogAffineBifunction LogAffineBifunction::from_matrix(const Manifold& m, Matrix a) {
  const bool diagonal = a.rows() == a.cols() &&
                        (a - Matrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  return LogAffineBifunction(m, std::move(a), BifunctionKind::Matrix,
                             diagonal ? Structure::Diagonal : Structure::Dense);
}

LogAffineBifunction LogAffineBifunction::from_matrix(Matrix a) {
  if (a.rows() == 0) throw Error(ErrorCode::InvalidArgument, "bifunction matrix is empty");
  const auto dim = static_cast<std::size_t>(a.rows());
  return from_matrix(Manifold::log_orthant(dim), std::move(a));
}

LogAffineBifunction LogAffineBifunction::from_row_major(std::size_t dim, std::span<const double> values) {
  if (values.size() != dim * dim) {
    std::ostringstream os;
    os << "matrix bifunction needs " << dim * dim << " values, got " << values.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = values[static_cast<std::size_t>(i * n + j)];
  }
  return from_matrix(std::move(a));
}

Vector LogAffineBifunction::apply(const Vector& u) const {
  switch (structure_) {
    case Structure::Diagonal: return (a_.diagonal().array() * u.array()).matrix();
    case Structure::RankOne: return (rank_one_alpha_ * rank_one_c_.dot(u)) * rank_one_c_;
    case Structure::Dense: break;
  }
  return a_ * u;
}

double LogAffineBifunction::eval_chart(const Vector& u, const Vector& w) const {
  return apply(u).dot(w - u);
}

double LogAffineBifunction::operator()(const Point& x, const Point& y) const {
  const Vector u = manifold_.to_chart(x);
  const Vector w = manifold_.to_chart(y);
  return eval_chart(u, w);
}

double LogAffineBifunction::min_symmetric_eigenvalue() const {
  switch (structure_) {
    case Structure::Diagonal: return a_.diagonal().minCoeff();
    case Structure::RankOne: {
      const double nonzero = rank_one_alpha_ * rank_one_c_.squaredNorm();
      return dim() == 1 ? nonzero : std::min(0.0, nonzero);
    }
    case Structure::Dense: break;
  }
  const Matrix sym = 0.5 * (a_ + a_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::optional<double> LogAffineBifunction::strong_monotonicity_modulus() const {
  const double v = min_symmetric_eigenvalue();
  if (v > 0.0) return v;
  return std::nullopt;
}

ShiftedSystem LogAffineBifunction::shifted(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::InvalidArgument, "resolvent parameter must be positive and finite");
  }
  switch (structure_) {
    case Structure::Diagonal: {
      Vector d = Vector::Ones(a_.rows()) + s * a_.diagonal();
      if ((d.array() == 0.0).any()) throw Error(ErrorCode::SingularSystem, "I + lambda*A is singular");
      return ShiftedSystem(s, ShiftedSystem::Diagonal{d.cwiseInverse()});
    }
    case Structure::RankOne: {
      const double denom = 1.0 + s * rank_one_alpha_ * rank_one_c_.squaredNorm();
      if (denom == 0.0) throw Error(ErrorCode::SingularSystem, "I + lambda*A is singular");
      return ShiftedSystem(s, ShiftedSystem::RankOne{rank_one_c_, s * rank_one_alpha_ / denom});
    }
    case Structure::Dense: break;
  }
  const Matrix m = Matrix::Identity(a_.rows(), a_.cols()) + s * a_;
  Eigen::PartialPivLU<Matrix> lu(m);
  if (!(lu.rcond() > 1e-14)) throw Error(ErrorCode::SingularSystem, "I + lambda*A is singular");
  return ShiftedSystem(s, ShiftedSystem::Dense{std::move(lu)});
}

Vector LogAffineBifunction::solve_dense(double s, const Vector& u) const {
  const Matrix m = Matrix::Identity(a_.rows(), a_.cols()) + s * a_;
  return m.partialPivLu().solve(u);
}

Vector paper_literal_ex51_chart(const Vector& u, double lambda) {
  if (u.size() != 3) throw Error(ErrorCode::DimensionMismatch, "example51 formula needs N = 3");
  const double l3 = 3.0 * lambda;
  const double inv = 1.0 / (1.0 + l3);
  Vector v(3);
  // ln of (x1 x2^{3l} x3^{3l}, x1^{3l} x2^{-1} x3^{3l}, x1^{3l} x2^{3l} x3^{1+6l})^{1/(1+3l)}
  v(0) = (u(0) + l3 * u(1) + l3 * u(2)) * inv;
  v(1) = (l3 * u(0) - u(1) + l3 * u(2)) * inv;
  v(2) = (l3 * u(0) + l3 * u(1) + (1.0 + 2.0 * l3) * u(2)) * inv;
  return v;
}

Resolvent::Resolvent(const LogAffineBifunction& f, double lambda, Regularizer reg, ResolventVariant variant)
    : f_(&f), lambda_(lambda), reg_(reg), variant_(variant) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "resolvent parameter must be positive and finite");
  }
  effective_ = reg == Regularizer::Busemann ? lambda : lambda / 2.0;
  if (variant == ResolventVariant::PaperLiteralEx51) {
    if (f.kind() != BifunctionKind::Example51 || f.manifold() != Manifold::log_orthant(3)) {
      throw Error(ErrorCode::VariantMismatch,
                  "paper-literal resolvent is only defined for example51 on LogOrthant(3)");
    }
  } else {
    system_ = f.shifted(effective_);
  }
}

Vector Resolvent::apply_chart(const Vector& u) const {
  if (variant_ == ResolventVariant::PaperLiteralEx51) return paper_literal_ex51_chart(u, effective_);
  return system_->solve(u);
}

Point Resolvent::operator()(const Point& x) const {
  const Manifold& m = f_->manifold();
  return m.from_chart(apply_chart(m.to_chart(x)));
}

Point resolvent_busemann(const LogAffineBifunction& f, double lambda, const Point& x, ResolventVariant variant) {
  return Resolvent(f, lambda, Regularizer::Busemann, variant)(x);
}

Point resolvent_distsq(const LogAffineBifunction& f, double lambda, const Point& x, ResolventVariant variant) {
  return Resolvent(f, lambda, Regularizer::DistanceSquared, variant)(x);
}

Point prox_step(const LogAffineBifunction& f, double lambda, const Point& center, const Point& anchor) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "prox parameter must be positive and finite");
  }
  const Manifold& m = f.manifold();
  const Vector u = m.to_chart(center);
  const Vector v = m.to_chart(anchor);
  return m.from_chart(u - lambda * f.apply(v));
}

double busemann_resolvent_residual(const LogAffineBifunction& f, double lambda, const Point& x,
                                   const Point& z, const Point& y) {
  const Manifold& m = f.manifold();
  const double reg = dist(m, z, x) < GeodesicRay::kMinLength ? 0.0 : busemann_pairing(m, z, x, y);
  return lambda * f(z, y) + reg;
}

double distsq_resolvent_residual(const LogAffineBifunction& f, double lambda, const Point& x,
                                 const Point& z, const Point& y) {
  const Manifold& m = f.manifold();
  return lambda * f(z, y) + (dist_sq(m, y, x) - dist_sq(m, z, x));
}

double prox_residual(const LogAffineBifunction& f, double lambda, const Point& center, const Point& anchor,
                     const Point& x_plus, const Point& y) {
  const Manifold& m = f.manifold();
  const Tangent to_center = log_map(m, x_plus, center);
  const Tangent to_y = log_map(m, x_plus, y);
  return lambda * (f(anchor, y) - f(anchor, x_plus)) - inner(m, x_plus, to_center.vec(), to_y.vec());
}

PointSampler chart_box_sampler(const Manifold& m, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "sampler box needs lo < hi");
  return [m, lo, hi](CounterRng& rng) {
    Vector u(static_cast<Eigen::Index>(m.dim()));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = rng.uniform(lo, hi);
    return m.from_chart(u);
  };
}

ProbeReport probe_monotone(const Bifunction& f, const PointSampler& sampler, CounterRng& rng,
                           std::size_t trials, double tol) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "probe needs at least one trial");
  ProbeReport r;
  r.tolerance = tol;
  r.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    Point x = sampler(rng);
    Point y = sampler(rng);
    const double v = f(x, y) + f(y, x);
    ++r.considered;
    if (v > r.max_value) {
      r.max_value = v;
      r.witness_x = std::move(x);
      r.witness_y = std::move(y);
    }
  }
  r.passed = r.max_value <= tol;
  return r;
}

ProbeReport probe_strong_pseudomonotone(const Bifunction& f, double beta, const PointSampler& sampler,
                                        CounterRng& rng, std::size_t trials, double tol) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "probe needs at least one trial");
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "strong pseudomonotonicity needs beta > 0");
  ProbeReport r;
  r.tolerance = tol;
  r.trials = trials;
  const Manifold& m = f.manifold();
  for (std::size_t k = 0; k < trials; ++k) {
    Point x = sampler(rng);
    Point y = sampler(rng);
    if (f(x, y) < 0.0) std::swap(x, y);
    if (f(x, y) < 0.0) continue;
    ++r.considered;
    const double v = f(y, x) + beta * dist_sq(m, x, y);
    if (v > r.max_value) {
      r.max_value = v;
      r.witness_x = std::move(x);
      r.witness_y = std::move(y);
    }
  }
  r.passed = r.max_value <= tol;
  return r;
}

}  // namespace heq
