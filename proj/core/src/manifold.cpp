#include "heq/manifold.hpp"

#include <cmath>
#include <sstream>

#include "heq/numeric.hpp"

namespace heq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::InvalidPoint: return "invalid point";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DegenerateRay: return "degenerate ray";
    case ErrorCode::SingularSystem: return "singular system";
    case ErrorCode::VariantMismatch: return "variant mismatch";
    case ErrorCode::NonFinite: return "non-finite iterate";
    case ErrorCode::MissingData: return "missing data";
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

Point::Point(std::initializer_list<double> coords) : coords_(static_cast<Eigen::Index>(coords.size())) {
  Eigen::Index i = 0;
  for (double c : coords) coords_(i++) = c;
}

Tangent::Tangent(Point base, Vector vec) : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != static_cast<Eigen::Index>(base_.dim())) {
    throw Error(ErrorCode::DimensionMismatch, "tangent vector length differs from base point dimension");
  }
  if (!vec_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "tangent vector has non-finite components");
  }
}

Manifold Manifold::log_orthant(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "manifold dimension must be >= 1");
  return Manifold(Geometry::LogOrthant, dim);
}

Manifold Manifold::euclidean(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "manifold dimension must be >= 1");
  return Manifold(Geometry::Euclidean, dim);
}

bool Manifold::contains(const Point& x) const noexcept {
  if (x.dim() != dim_) return false;
  const Vector& c = x.coords();
  if (geometry_ == Geometry::Euclidean) return c.allFinite();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!(c(i) > kMinCoordinate && c(i) < kMaxCoordinate)) return false;
  }
  return true;
}

void Manifold::require(const Point& x) const {
  if (x.dim() != dim_) {
    std::ostringstream os;
    os << "point has dimension " << x.dim() << ", manifold has " << dim_;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!contains(x)) {
    throw Error(ErrorCode::InvalidPoint, geometry_ == Geometry::LogOrthant
                                             ? "LogOrthant coordinates must lie in (1e-300, 1e300)"
                                             : "Euclidean coordinates must be finite");
  }
}

void Manifold::require(const Tangent& v) const { require(v.base()); }

Point Manifold::point(Vector coords) const {
  Point p(std::move(coords));
  require(p);
  return p;
}

Point Manifold::point(std::initializer_list<double> coords) const {
  Point p(coords);
  require(p);
  return p;
}

Vector Manifold::to_chart(const Point& x) const {
  require(x);
  if (geometry_ == Geometry::Euclidean) return x.coords();
  return x.coords().array().log().matrix();
}

Point Manifold::from_chart(const Vector& u) const {
  if (u.size() != static_cast<Eigen::Index>(dim_)) {
    throw Error(ErrorCode::DimensionMismatch, "chart vector length differs from manifold dimension");
  }
  Point p(geometry_ == Geometry::Euclidean ? u : Vector(u.array().exp().matrix()));
  if (!contains(p)) throw Error(ErrorCode::NonFinite, "chart vector maps outside the valid domain");
  return p;
}

namespace {

void require_same(const Manifold& m, const Point& x, const Point& y) {
  m.require(x);
  m.require(y);
}

// Chart-coordinate difference u_y - u_x, computed as ln(y_i/x_i) on LogOrthant
// to avoid cancellation between nearby logs.
Vector chart_delta(const Manifold& m, const Point& x, const Point& y) {
  if (m.geometry() == Geometry::Euclidean) return y.coords() - x.coords();
  return (y.coords().array() / x.coords().array()).log().matrix();
}

}  // namespace

double dist_sq(const Manifold& m, const Point& x, const Point& y) {
  require_same(m, x, y);
  const Vector d = chart_delta(m, x, y);
  CompensatedSum s;
  for (Eigen::Index i = 0; i < d.size(); ++i) s += d(i) * d(i);
  return s.value();
}

double dist(const Manifold& m, const Point& x, const Point& y) {
  require_same(m, x, y);
  return chart_delta(m, x, y).norm();
}

Tangent log_map(const Manifold& m, const Point& x, const Point& y) {
  require_same(m, x, y);
  Vector d = chart_delta(m, x, y);
  if (m.geometry() == Geometry::LogOrthant) d.array() *= x.coords().array();
  return Tangent(x, std::move(d));
}

Point exp_map(const Manifold& m, const Tangent& v) {
  m.require(v);
  const Vector& x = v.base().coords();
  Point out(m.geometry() == Geometry::Euclidean
                ? Vector(x + v.vec())
                : Vector((x.array() * (v.vec().array() / x.array()).exp()).matrix()));
  if (!m.contains(out)) throw Error(ErrorCode::NonFinite, "exp_map left the valid domain");
  return out;
}

double inner(const Manifold& m, const Point& x, const Vector& u, const Vector& v) {
  m.require(x);
  const auto n = static_cast<Eigen::Index>(m.dim());
  if (u.size() != n || v.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "tangent vector length differs from manifold dimension");
  }
  if (m.geometry() == Geometry::Euclidean) return u.dot(v);
  return (u.array() * v.array() / x.coords().array().square()).sum();
}

double norm(const Manifold& m, const Tangent& v) {
  return std::sqrt(inner(m, v.base(), v.vec(), v.vec()));
}

Point geodesic(const Manifold& m, const Point& x, const Point& y, double t) {
  require_same(m, x, y);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, "geodesic parameter must be finite and >= 0");
  }
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  const Vector d = chart_delta(m, x, y);
  return m.from_chart(m.to_chart(x) + t * d);
}

double chart_scale(const Manifold& m, const Point& x) { return m.to_chart(x).norm(); }

}  // namespace heq
