#pragma once

#include <functional>
#include <memory>
#include <string>

#include "hardpair/types.hpp"

namespace hardpair {

enum class BodyKind { Disk, Ellipse, Implicit };

/// Mass m (area at unit density) and polar moment J about the centroid.
struct MassProps {
  double m = 0.0;
  double J = 0.0;
};

/// Callables describing a generic implicit body. `level` is b*, negative
/// inside and positive outside; `boundary` is a 2pi-periodic
/// counter-clockwise parameterization of {b* = 0}. `tangent` may be left
/// empty, in which case it is obtained by central differences.
struct ImplicitShape {
  std::string name;
  std::function<double(const Vector2d&)> level;
  std::function<Vector2d(double)> boundary;
  std::function<Vector2d(double)> tangent;
};

/// A compact strictly convex reference particle centred at the origin of its
/// body frame. Immutable after construction.
class Body {
 public:
  BodyKind kind() const { return kind_; }
  const MassProps& mass_props() const { return mass_; }
  double mass() const { return mass_.m; }
  double inertia() const { return mass_.J; }

  /// Disk radius, or the ellipse semi-axes (a, b). Zero for implicit bodies.
  double radius() const { return a_; }
  double semi_major() const { return a_; }
  double semi_minor() const { return b_; }

  /// Largest distance from the centroid to the boundary.
  double circumradius() const { return circumradius_; }
  /// 2 * circumradius; used as the length scale in tolerances.
  double diameter() const { return 2.0 * circumradius_; }

  /// b*(y): < 0 inside, 0 on the boundary, > 0 outside.
  double level(const Vector2d& y) const;
  Vector2d point(double s) const;
  /// d(point)/ds.
  Vector2d tangent(double s) const;
  /// Outward unit normal at point(s).
  Vector2d normal(double s) const;

  std::string describe() const;

  /// Overrides m and J; used to build synthetic test bodies.
  Body with_mass_props(MassProps props) const;

 private:
  friend Body make_disk(double r);
  friend Body make_ellipse(double a, double b);
  friend Body make_implicit(ImplicitShape shape);

  Body() = default;

  BodyKind kind_ = BodyKind::Disk;
  double a_ = 0.0;
  double b_ = 0.0;
  MassProps mass_;
  double circumradius_ = 0.0;
  std::shared_ptr<const ImplicitShape> shape_;
};

Body make_disk(double r);
Body make_ellipse(double a, double b);

/// Builds a body from implicit data, integrates its mass properties from the
/// boundary and checks convexity, level-set consistency and that the centroid
/// sits at the origin. Throws ValidationError on failure.
Body make_implicit(ImplicitShape shape);

/// Analytic oval b*(y) = X^2 + Y^2 + k X^2 Y^2 - 1 with X = y1/a, Y = y2/b.
/// Strictly convex for small k >= 0; k = 0 is the ellipse.
Body make_quartic_oval(double a, double b, double k);

inline Vector2d boundary_point(const Body& body, double s) { return body.point(s); }
inline Vector2d outward_normal(const Body& body, double s) { return body.normal(s); }

/// diag(sqrt m, sqrt m, sqrt m, sqrt m, sqrt J, sqrt J).
using MassInertiaMatrix = Eigen::DiagonalMatrix<double, 6>;

inline MassInertiaMatrix mass_inertia_matrix(const MassProps& props) {
  const double sm = std::sqrt(props.m);
  const double sj = std::sqrt(props.J);
  Vector6d diag;
  diag << sm, sm, sm, sm, sj, sj;
  return MassInertiaMatrix(diag);
}

inline MassInertiaMatrix mass_inertia_matrix(const Body& body) {
  return mass_inertia_matrix(body.mass_props());
}

/// Sampled invariant checks for a body.
struct BodyCheck {
  double max_level_on_boundary = 0.0;
  double max_normal_tangent_dot = 0.0;
  double min_curvature = 0.0;
  double centroid_offset = 0.0;
  bool inside_negative = true;
  bool outside_positive = true;
};

BodyCheck check_body(const Body& body, int samples = 1000);

}  // namespace hardpair
