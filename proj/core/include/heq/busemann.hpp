#pragma once

#include "heq/manifold.hpp"

namespace heq {

/// Unit-speed geodesic ray gamma_{z,x} starting at z and passing through x.
class GeodesicRay {
 public:
  /// Rays with d(z,x) below this are rejected as degenerate.
  static constexpr double kMinLength = 1e-14;

  GeodesicRay(Manifold m, Point origin, Point through);

  const Manifold& manifold() const noexcept { return manifold_; }
  const Point& origin() const noexcept { return origin_; }
  const Point& through() const noexcept { return through_; }
  /// d(z, x).
  double length() const noexcept { return length_; }
  /// Unit direction in chart coordinates.
  const Vector& direction() const noexcept { return direction_; }

  /// gamma(t) at arc length t >= 0.
  Point at(double t) const;

 private:
  Manifold manifold_;
  Point origin_;
  Point through_;
  Vector origin_chart_;
  Vector direction_;
  double length_ = 0.0;
};

/// b_gamma(y) = <u_x - u_z, u_z - u_y> / |u_x - u_z| in chart coordinates.
double busemann_closed(const GeodesicRay& ray, const Point& y);

/// d(y, gamma(t)) - t, the finite-time approximant of the Busemann function.
double busemann_finite_t(const GeodesicRay& ray, const Point& y, double t);

/// d(x,z) * b_{gamma_{z,x}}(y). Throws DegenerateRay when z == x.
double busemann_pairing(const Manifold& m, const Point& z, const Point& x, const Point& y);

/// Right-hand side of the pairing inequality, -<log_z x, log_z y>_z.
double busemann_pairing_bound(const Manifold& m, const Point& z, const Point& x, const Point& y);

}  // namespace heq
