#include "heq/busemann.hpp"

#include <cmath>

namespace heq {

GeodesicRay::GeodesicRay(Manifold m, Point origin, Point through)
    : manifold_(m), origin_(std::move(origin)), through_(std::move(through)) {
  origin_chart_ = manifold_.to_chart(origin_);
  Vector d = manifold_.to_chart(through_) - origin_chart_;
  length_ = dist(manifold_, origin_, through_);
  if (!(length_ >= kMinLength)) {
    throw Error(ErrorCode::DegenerateRay, "geodesic ray needs distinct origin and through points");
  }
  direction_ = d / d.norm();
}

Point GeodesicRay::at(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, "ray arc length must be finite and >= 0");
  }
  return manifold_.from_chart(origin_chart_ + t * direction_);
}

double busemann_closed(const GeodesicRay& ray, const Point& y) {
  const Vector uy = ray.manifold().to_chart(y);
  const Vector uz = ray.manifold().to_chart(ray.origin());
  return ray.direction().dot(uz - uy);
}

double busemann_finite_t(const GeodesicRay& ray, const Point& y, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "busemann_finite_t needs t > 0");
  // Evaluated in the chart: gamma(t) itself overflows the orthant for large t.
  const Manifold& m = ray.manifold();
  const Vector gamma_t = m.to_chart(ray.origin()) + t * ray.direction();
  return (m.to_chart(y) - gamma_t).norm() - t;
}

double busemann_pairing(const Manifold& m, const Point& z, const Point& x, const Point& y) {
  const GeodesicRay ray(m, z, x);
  return ray.length() * busemann_closed(ray, y);
}

double busemann_pairing_bound(const Manifold& m, const Point& z, const Point& x, const Point& y) {
  const Tangent vx = log_map(m, z, x);
  const Tangent vy = log_map(m, z, y);
  return -inner(m, z, vx.vec(), vy.vec());
}

}  // namespace heq
