#include "hardpair/body.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace hardpair {

namespace {

constexpr int kQuadraturePoints = 4096;
constexpr double kTangentStep = 1e-6;
constexpr double kCentroidTolerance = 1e-8;

Vector2d central_difference(const std::function<Vector2d(double)>& f, double s, double h) {
  return (f(s + h) - f(s - h)) / (2.0 * h);
}

}  // namespace

double Body::level(const Vector2d& y) const {
  switch (kind_) {
    case BodyKind::Disk:
      return y.squaredNorm() / (a_ * a_) - 1.0;
    case BodyKind::Ellipse:
      return (y(0) * y(0)) / (a_ * a_) + (y(1) * y(1)) / (b_ * b_) - 1.0;
    case BodyKind::Implicit:
      return shape_->level(y);
  }
  return 0.0;
}

Vector2d Body::point(double s) const {
  switch (kind_) {
    case BodyKind::Disk:
      return a_ * unit_direction(s);
    case BodyKind::Ellipse:
      return Vector2d(a_ * std::cos(s), b_ * std::sin(s));
    case BodyKind::Implicit:
      return shape_->boundary(s);
  }
  return Vector2d::Zero();
}

Vector2d Body::tangent(double s) const {
  switch (kind_) {
    case BodyKind::Disk:
      return a_ * Vector2d(-std::sin(s), std::cos(s));
    case BodyKind::Ellipse:
      return Vector2d(-a_ * std::sin(s), b_ * std::cos(s));
    case BodyKind::Implicit:
      if (shape_->tangent) return shape_->tangent(s);
      return central_difference(shape_->boundary, s, kTangentStep);
  }
  return Vector2d::Zero();
}

Vector2d Body::normal(double s) const {
  const Vector2d t = tangent(s);
  return Vector2d(t(1), -t(0)).normalized();
}

std::string Body::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case BodyKind::Disk:
      os << "disk(r=" << a_ << ")";
      break;
    case BodyKind::Ellipse:
      os << "ellipse(a=" << a_ << ", b=" << b_ << ")";
      break;
    case BodyKind::Implicit:
      os << "implicit(" << shape_->name << ")";
      break;
  }
  return os.str();
}

Body Body::with_mass_props(MassProps props) const {
  if (!(props.m > 0.0) || !(props.J > 0.0)) {
    throw ValidationError("mass and inertia must be positive");
  }
  Body copy = *this;
  copy.mass_ = props;
  return copy;
}

Body make_disk(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw ValidationError("disk radius must be positive, got " + std::to_string(r));
  }
  Body body;
  body.kind_ = BodyKind::Disk;
  body.a_ = r;
  body.b_ = r;
  body.mass_ = {kPi * r * r, kPi * r * r * r * r / 2.0};
  body.circumradius_ = r;
  return body;
}

Body make_ellipse(double a, double b) {
  if (!(b > 0.0) || !std::isfinite(a) || !(a >= b)) {
    throw ValidationError("ellipse requires a >= b > 0");
  }
  Body body;
  body.kind_ = BodyKind::Ellipse;
  body.a_ = a;
  body.b_ = b;
  const double area = kPi * a * b;
  body.mass_ = {area, area * (a * a + b * b) / 4.0};
  body.circumradius_ = a;
  return body;
}

Body make_implicit(ImplicitShape shape) {
  if (!shape.level || !shape.boundary) {
    throw ValidationError("implicit body needs both a level function and a boundary parameterization");
  }
  Body body;
  body.kind_ = BodyKind::Implicit;
  body.shape_ = std::make_shared<const ImplicitShape>(std::move(shape));

  // Green's theorem on the periodic boundary; the trapezoid rule is
  // spectrally accurate for smooth periodic integrands.
  const double ds = kTwoPi / kQuadraturePoints;
  double area = 0.0, polar = 0.0, rmax = 0.0;
  for (int i = 0; i < kQuadraturePoints; ++i) {
    const double s = i * ds;
    const Vector2d p = body.point(s);
    const Vector2d t = body.tangent(s);
    area += 0.5 * (p(0) * t(1) - p(1) * t(0));
    polar += (p(0) * p(0) * p(0) * t(1) - p(1) * p(1) * p(1) * t(0)) / 3.0;
    rmax = std::max(rmax, p.norm());
  }
  area *= ds;
  polar *= ds;
  if (!(area > 0.0) || !(polar > 0.0)) {
    throw ValidationError("implicit body has non-positive area; boundary must run counter-clockwise");
  }
  body.mass_ = {area, polar};
  body.circumradius_ = rmax;

  const BodyCheck check = check_body(body);
  if (check.centroid_offset > kCentroidTolerance) {
    throw ValidationError("implicit body centroid is off the origin by " +
                          std::to_string(check.centroid_offset));
  }
  if (!(check.min_curvature > 0.0)) {
    throw ValidationError("implicit body is not strictly convex (sampled curvature <= 0)");
  }
  if (!check.inside_negative || !check.outside_positive || check.max_level_on_boundary > 1e-10) {
    throw ValidationError("implicit body level function disagrees with its boundary parameterization");
  }
  return body;
}

Body make_quartic_oval(double a, double b, double k) {
  if (!(b > 0.0) || !(a > 0.0) || !(k >= 0.0)) {
    throw ValidationError("quartic oval requires a, b > 0 and k >= 0");
  }
  ImplicitShape shape;
  std::ostringstream name;
  name.precision(17);
  name << "quartic_oval(a=" << a << ", b=" << b << ", k=" << k << ")";
  shape.name = name.str();
  shape.level = [a, b, k](const Vector2d& y) {
    const double x2 = (y(0) / a) * (y(0) / a);
    const double y2 = (y(1) / b) * (y(1) / b);
    return x2 + y2 + k * x2 * y2 - 1.0;
  };
  // Radial parameterization: r^2 solves k C T r^4 + (C + T) r^2 - 1 = 0.
  shape.boundary = [a, b, k](double s) {
    const double c = std::cos(s), t = std::sin(s);
    const double cc = c * c / (a * a), tt = t * t / (b * b);
    const double sum = cc + tt;
    const double r2 = 2.0 / (sum + std::sqrt(sum * sum + 4.0 * k * cc * tt));
    return Vector2d(std::sqrt(r2) * c, std::sqrt(r2) * t);
  };
  return make_implicit(std::move(shape));
}

BodyCheck check_body(const Body& body, int samples) {
  BodyCheck out;
  out.min_curvature = std::numeric_limits<double>::infinity();
  const double ds = kTwoPi / samples;
  const double h = 1e-5;
  for (int i = 0; i < samples; ++i) {
    const double s = i * ds;
    const Vector2d p = body.point(s);
    out.max_level_on_boundary = std::max(out.max_level_on_boundary, std::abs(body.level(p)));

    const Vector2d fd_tangent = (body.point(s + h) - body.point(s - h)) / (2.0 * h);
    out.max_normal_tangent_dot =
        std::max(out.max_normal_tangent_dot, std::abs(body.normal(s).dot(fd_tangent.normalized())));

    const Vector2d t = body.tangent(s);
    const Vector2d dt = (body.tangent(s + h) - body.tangent(s - h)) / (2.0 * h);
    out.min_curvature = std::min(out.min_curvature, cross(t, dt) / std::pow(t.norm(), 3));

    if (!(body.level(0.5 * p) < 0.0)) out.inside_negative = false;
    if (!(body.level(1.5 * p) > 0.0)) out.outside_positive = false;
  }

  // Centroid from Green's theorem with the same resolution as the sampling.
  double area = 0.0, mx = 0.0, my = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vector2d p = body.point(i * ds);
    const Vector2d t = body.tangent(i * ds);
    area += 0.5 * (p(0) * t(1) - p(1) * t(0));
    mx += 0.5 * p(0) * p(0) * t(1);
    my -= 0.5 * p(1) * p(1) * t(0);
  }
  out.centroid_offset = Vector2d(mx / area, my / area).norm();
  return out;
}

}  // namespace hardpair
