#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "heq/manifold.hpp"
#include "heq/rng.hpp"

namespace heq {

/// Bifunction F : M x M -> R with F(x, x) = 0.
class Bifunction {
 public:
  virtual ~Bifunction() = default;
  virtual const Manifold& manifold() const noexcept = 0;
  virtual double operator()(const Point& x, const Point& y) const = 0;
};

/// Which resolvent formula to use.
///
/// Characterization solves the defining inequality exactly. PaperLiteralEx51
/// evaluates a published closed form for example51. That formula does not
/// solve the resolvent inequality: the iteration it drives stops on the plane
/// x1 = x2*x3, while the solutions are x1*x2 = x3. It is kept so published
/// iteration counts can be compared.
enum class ResolventVariant { Characterization, PaperLiteralEx51 };

enum class BifunctionKind { Example51, Example52, Matrix };

std::string_view to_string(ResolventVariant v);
std::string_view to_string(BifunctionKind k);
ResolventVariant parse_variant(std::string_view s);

/// Factorization of (I + s*A) for a fixed shift s.
class ShiftedSystem {
 public:
  double shift() const noexcept { return shift_; }
  Vector solve(const Vector& rhs) const;

 private:
  friend class LogAffineBifunction;
  struct Diagonal { Vector inv_diag; };
  struct RankOne { Vector c; double scale; };  // (I + scale*c*c^T)^{-1} via Sherman-Morrison
  struct Dense { Eigen::PartialPivLU<Matrix> lu; };

  ShiftedSystem(double shift, std::variant<Diagonal, RankOne, Dense> impl)
      : shift_(shift), impl_(std::move(impl)) {}

  double shift_;
  std::variant<Diagonal, RankOne, Dense> impl_;
};

/// F(x, y) = <A u, w - u> with u, w the chart coordinates of x, y.
///
/// example51 is A = 3 c c^T with c = (1, 1, -1) on LogOrthant(3);
/// example52 is A = I on LogOrthant(N).
class LogAffineBifunction final : public Bifunction {
 public:
  enum class Structure { Diagonal, RankOne, Dense };

  static LogAffineBifunction example51();
  static LogAffineBifunction example52(std::size_t dim);
  static LogAffineBifunction from_matrix(Matrix a);
  static LogAffineBifunction from_matrix(const Manifold& m, Matrix a);
  /// A given row-major as N*N values.
  static LogAffineBifunction from_row_major(std::size_t dim, std::span<const double> values);
  /// alpha * c c^T, solved by Sherman-Morrison.
  static LogAffineBifunction rank_one(const Manifold& m, double alpha, Vector c);

  const Manifold& manifold() const noexcept override { return manifold_; }
  double operator()(const Point& x, const Point& y) const override;
  double eval_chart(const Vector& u, const Vector& w) const;

  /// A * u.
  Vector apply(const Vector& u) const;
  const Matrix& matrix() const noexcept { return a_; }
  std::size_t dim() const noexcept { return manifold_.dim(); }
  BifunctionKind kind() const noexcept { return kind_; }
  Structure structure() const noexcept { return structure_; }

  /// Smallest eigenvalue of the symmetric part (A + A^T) / 2.
  double min_symmetric_eigenvalue() const;
  /// True when the symmetric part of A is positive semidefinite.
  bool is_monotone(double tol = 1e-12) const { return min_symmetric_eigenvalue() >= -tol; }
  /// Strong monotonicity modulus, when positive.
  std::optional<double> strong_monotonicity_modulus() const;

  /// Factorization of I + s*A. Throws SingularSystem.
  ShiftedSystem shifted(double s) const;
  /// Dense LU solve of (I + s*A) v = u, independent of the structured path.
  Vector solve_dense(double s, const Vector& u) const;

 private:
  LogAffineBifunction(Manifold m, Matrix a, BifunctionKind kind, Structure s);

  Manifold manifold_;
  Matrix a_;
  BifunctionKind kind_;
  Structure structure_;
  Vector rank_one_c_;
  double rank_one_alpha_ = 0.0;
};

inline double eval(const LogAffineBifunction& f, const Point& x, const Point& y) { return f(x, y); }

enum class Regularizer { Busemann, DistanceSquared };

/// The resolvent map x -> z for a fixed bifunction, parameter and regularizer.
///
/// Busemann: z solves lambda F(z,y) + d(z,x) b_{gamma_{z,x}}(y) >= 0 for all y.
/// On a flat manifold d(z,x) b(y) = -<log_z x, log_z y>, so in chart
/// coordinates the condition reads <(I + lambda A) v - u_x, w - v> >= 0 for all
/// w, i.e. (I + lambda A) v = u_x.
///
/// DistanceSquared: z solves lambda F(z,y) + d^2(y,x) - d^2(z,x) >= 0 for all
/// y, which reduces to (I + (lambda/2) A) v = u_x. The two maps therefore agree
/// exactly at parameters lambda/2 and lambda.
class Resolvent {
 public:
  Resolvent(const LogAffineBifunction& f, double lambda, Regularizer reg,
            ResolventVariant variant = ResolventVariant::Characterization);

  Point operator()(const Point& x) const;
  Vector apply_chart(const Vector& u) const;

  double lambda() const noexcept { return lambda_; }
  /// Parameter of the equivalent Busemann-type resolvent.
  double effective_lambda() const noexcept { return effective_; }
  Regularizer regularizer() const noexcept { return reg_; }
  ResolventVariant variant() const noexcept { return variant_; }

 private:
  const LogAffineBifunction* f_;
  double lambda_;
  double effective_;
  Regularizer reg_;
  ResolventVariant variant_;
  std::optional<ShiftedSystem> system_;
};

Point resolvent_busemann(const LogAffineBifunction& f, double lambda, const Point& x,
                         ResolventVariant variant = ResolventVariant::Characterization);
Point resolvent_distsq(const LogAffineBifunction& f, double lambda, const Point& x,
                       ResolventVariant variant = ResolventVariant::Characterization);

/// Printed example51 closed form, in chart coordinates.
Vector paper_literal_ex51_chart(const Vector& u, double lambda);

/// argmin_y { F(anchor, y) + d^2(center, y) / (2 lambda) }. For log-affine F
/// the minimizer is w = u_center - lambda * A * v_anchor in chart coordinates.
Point prox_step(const LogAffineBifunction& f, double lambda, const Point& center, const Point& anchor);

/// lambda F(z,y) + d(z,x) b_{gamma_{z,x}}(y); zero Busemann term when z == x.
double busemann_resolvent_residual(const LogAffineBifunction& f, double lambda, const Point& x,
                                   const Point& z, const Point& y);
/// lambda F(z,y) + d^2(y,x) - d^2(z,x).
double distsq_resolvent_residual(const LogAffineBifunction& f, double lambda, const Point& x,
                                 const Point& z, const Point& y);
/// lambda (F(anchor,y) - F(anchor,x+)) - <log_{x+} center, log_{x+} y>.
double prox_residual(const LogAffineBifunction& f, double lambda, const Point& center,
                     const Point& anchor, const Point& x_plus, const Point& y);

using PointSampler = std::function<Point(CounterRng&)>;

/// Chart coordinates drawn uniformly from [lo, hi]^N.
PointSampler chart_box_sampler(const Manifold& m, double lo, double hi);

struct ProbeReport {
  double max_value = -std::numeric_limits<double>::infinity();
  std::optional<Point> witness_x;
  std::optional<Point> witness_y;
  std::size_t trials = 0;
  /// Pairs that satisfied the probe's hypothesis.
  std::size_t considered = 0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Samples pairs and reports max F(x,y) + F(y,x); passes when <= tol.
ProbeReport probe_monotone(const Bifunction& f, const PointSampler& sampler, CounterRng& rng,
                           std::size_t trials, double tol = 1e-12);

/// Over sampled pairs with F(x,y) >= 0 reports max F(y,x) + beta d^2(x,y).
ProbeReport probe_strong_pseudomonotone(const Bifunction& f, double beta, const PointSampler& sampler,
                                        CounterRng& rng, std::size_t trials, double tol = 1e-12);

}  // namespace heq
