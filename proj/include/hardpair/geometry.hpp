#pragma once

#include <optional>

#include "hardpair/body.hpp"

namespace hardpair {

/// Collision configuration: orientations of both particles and the direction
/// of the centre line from the first to the second. Angles live in [0, 2pi).
struct Beta {
  double theta = 0.0;
  double thetabar = 0.0;
  double psi = 0.0;

  Beta() = default;
  Beta(double theta_, double thetabar_, double psi_)
      : theta(wrap_angle(theta_)), thetabar(wrap_angle(thetabar_)), psi(wrap_angle(psi_)) {}

  /// Relative orientation thetabar - theta, in [0, 2pi).
  double theta_rel() const { return wrap_angle(thetabar - theta); }
  /// Centre-line direction in the first body's frame, psi - theta.
  double psi_rel() const { return wrap_angle(psi - theta); }
};

/// Partial derivatives of D(theta_rel, psi_rel).
struct DDerivatives {
  double dtheta = 0.0;
  double dpsi = 0.0;
};

/// Geometric payload of a contact. Vectors are measured from the first
/// body's centre.
struct ContactData {
  double d = 0.0;       ///< distance of closest approach
  Vector2d p;           ///< collision vector (contact point)
  Vector2d q;           ///< conjugate collision vector, p - d e(psi)
  Vector2d n;           ///< outward normal of the first body at p
  double psi = 0.0;     ///< centre-line direction the data refer to
  double s1 = 0.0;      ///< boundary parameter of p on the first body
  double s2 = 0.0;      ///< boundary parameter of p on the second body
  std::optional<DDerivatives> derivatives;
  bool used_fallback = false;
  int iterations = 0;
};

struct ContactOptions {
  int scan_points = 64;
  int max_iterations = 50;
  double damping = 0.5;
  double residual_tolerance = 1e-14;
  double fallback_tolerance = 1e-10;
};

/// Distance of closest approach D(theta_rel, psi_rel) and the contact data
/// with the first body unrotated at the origin and the second rotated by
/// theta_rel and translated along e(psi_rel). Solves the tangency system
/// (point coincidence, antiparallel normals) for (s1, s2, d) by damped Newton
/// from a coarse scan; falls back to bisection on the overlap predicate.
/// Disks use the closed form d = 2r, p = r e.
ContactData closest_approach(const Body& body, double theta_rel, double psi_rel,
                             const ContactOptions& opts = {});

/// Independent oracle for D: bisection on the sampled overlap predicate.
/// Each predicate call samples 2048 boundary points of each body in the
/// other's frame and polishes the best sample by golden-section search.
double closest_approach_oracle(const Body& body, double theta_rel, double psi_rel,
                               double tol = 1e-10);

/// Lab-frame contact data for configuration beta: the reference-pose solution
/// at (thetabar - theta, psi - theta) rotated by R(theta).
ContactData d_beta(const Body& body, const Beta& beta, const ContactOptions& opts = {});

/// Central differences of D with step h, Richardson-extrapolated from h and
/// h/2.
DDerivatives d_derivatives(const Body& body, double theta_rel, double psi_rel, double h = 1e-5,
                           const ContactOptions& opts = {});

/// Gradient of the gap function F(X) = |x - xbar| - D(thetabar - theta,
/// psi - theta) at the contact configuration, normalized. It points into the
/// overlapping region, i.e. along the approach direction of pre-collisional
/// velocities.
Vector6d gamma_hat(const ContactData& contact);

/// gamma_hat with the derivatives of D computed at step h.
Vector6d gamma_hat(const Body& body, const Beta& beta, double h = 1e-5);

/// Collision-normal direction in velocity space before normalization:
/// (-n, n, -p_perp.n, q_perp.n).
Vector6d contact_normal_block(const ContactData& contact);

/// Residuals of the contact-data identities. Directions are compared as lines
/// (angles in radians), so sign conventions do not enter.
struct IdentityResiduals {
  /// Angle between n and e(psi) - (1/d) dD/dpsi e(psi)_perp.
  double normal_direction = 0.0;
  /// |p_perp.n - rhs| / (1 + |rhs|) with
  /// rhs = -(dD/dtheta + dD/dpsi) / sqrt(1 + (dD/dpsi / d)^2).
  double moment_arm = 0.0;
  /// Angle between the lines spanned by M nu_hat and gamma_hat.
  double gamma_collinearity = 0.0;
  /// Same as normal_direction, but with dD/dtheta in place of dD/dpsi.
  /// Diagnostic only.
  double normal_direction_dtheta = 0.0;
  /// gamma_collinearity against the dD/dtheta four-block normal. Diagnostic.
  double gamma_collinearity_dtheta = 0.0;
};

IdentityResiduals identity_residuals(const Body& body, const Beta& beta, double h = 1e-5);

}  // namespace hardpair
