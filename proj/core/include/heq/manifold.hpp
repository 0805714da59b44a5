#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>

#include "heq/error.hpp"

namespace heq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point in ambient coordinates. Validity is relative to a Manifold and is
/// checked by Manifold::point() and by every manifold operation.
class Point {
 public:
  Point() = default;
  explicit Point(Vector coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords);

  const Vector& coords() const noexcept { return coords_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_(static_cast<Eigen::Index>(i)); }

  friend bool operator==(const Point& a, const Point& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  Vector coords_;
};

/// Tangent vector `vec` in T_base M.
class Tangent {
 public:
  Tangent(Point base, Vector vec);

  const Point& base() const noexcept { return base_; }
  const Vector& vec() const noexcept { return vec_; }
  std::size_t dim() const noexcept { return base_.dim(); }

 private:
  Point base_;
  Vector vec_;
};

enum class Geometry { LogOrthant, Euclidean };

/// Flat Hadamard manifolds supported by the library.
///
/// LogOrthant is the positive orthant R^N_{++} with metric
/// <u,v>_x = sum_i u_i v_i / x_i^2. The componentwise logarithm is a global
/// isometry onto Euclidean R^N, so every operation is computed in that chart.
/// Euclidean is R^N with the standard metric and the identity chart.
class Manifold {
 public:
  static Manifold log_orthant(std::size_t dim);
  static Manifold euclidean(std::size_t dim);

  Geometry geometry() const noexcept { return geometry_; }
  std::size_t dim() const noexcept { return dim_; }

  /// Validates and wraps coordinates.
  Point point(Vector coords) const;
  Point point(std::initializer_list<double> coords) const;

  bool contains(const Point& x) const noexcept;
  void require(const Point& x) const;
  void require(const Tangent& v) const;

  /// Chart map into Euclidean coordinates (ln for LogOrthant) and its inverse.
  Vector to_chart(const Point& x) const;
  Point from_chart(const Vector& u) const;

  friend bool operator==(const Manifold& a, const Manifold& b) {
    return a.geometry_ == b.geometry_ && a.dim_ == b.dim_;
  }

 private:
  Manifold(Geometry g, std::size_t dim) : geometry_(g), dim_(dim) {}

  Geometry geometry_;
  std::size_t dim_;
};

/// Lower and upper (exclusive) coordinate bounds on LogOrthant.
inline constexpr double kMinCoordinate = 1e-300;
inline constexpr double kMaxCoordinate = 1e300;

double dist(const Manifold& m, const Point& x, const Point& y);

/// Squared distance with compensated summation.
double dist_sq(const Manifold& m, const Point& x, const Point& y);

/// Inverse exponential map exp_x^{-1} y.
Tangent log_map(const Manifold& m, const Point& x, const Point& y);

Point exp_map(const Manifold& m, const Tangent& v);

/// Riemannian inner product of u and v in T_x M.
double inner(const Manifold& m, const Point& x, const Vector& u, const Vector& v);
double norm(const Manifold& m, const Tangent& v);

/// Constant-speed geodesic with geodesic(x,y,0)=x and geodesic(x,y,1)=y.
/// Any t >= 0 is accepted; t > 1 continues along the same geodesic.
Point geodesic(const Manifold& m, const Point& x, const Point& y, double t);

/// Magnitude of the chart coordinates of x; used for round-off floors.
double chart_scale(const Manifold& m, const Point& x);

}  // namespace heq
