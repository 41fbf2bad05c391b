#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hardpair/frame.hpp"

namespace hardpair {

enum class FamilyKind { Reflection, EPsi, OrientationPreserving };

/// A rule beta -> s_beta. Reflection is the impulse-ansatz family, EPsi the
/// second orientation-reversing family (impulse along e(psi)_perp), and
/// OrientationPreserving reflects additionally in a line-field direction of
/// the complement plane.
struct ScatteringFamily {
  FamilyKind kind = FamilyKind::Reflection;
  LineField line_field = LineField::constant(0.0);

  static ScatteringFamily reflection() { return {FamilyKind::Reflection, LineField::constant(0.0)}; }
  static ScatteringFamily epsi() { return {FamilyKind::EPsi, LineField::constant(0.0)}; }
  static ScatteringFamily orientation_preserving(LineField lf) {
    return {FamilyKind::OrientationPreserving, std::move(lf)};
  }

  std::string name() const;
  /// +1 or -1: the determinant every matrix of the family must have.
  int orientation() const { return kind == FamilyKind::OrientationPreserving ? 1 : -1; }
};

// Orthogonal cores A_beta. Each is a symmetric involution.

template <typename Scalar>
Matrix6<Scalar> reflection_core(const Vector6<Scalar>& nu) {
  return Matrix6<Scalar>::Identity() - 2 * nu * nu.transpose();
}

template <typename Scalar>
Matrix6<Scalar> epsi_core(const Vector6<Scalar>& E1, const Vector6<Scalar>& E2,
                          const Vector6<Scalar>& Ebeta) {
  return 2 * (E1 * E1.transpose() + E2 * E2.transpose() + Ebeta * Ebeta.transpose()) -
         Matrix6<Scalar>::Identity();
}

template <typename Scalar>
Matrix6<Scalar> orientation_preserving_core(const Vector6<Scalar>& nu, const Vector6<Scalar>& F) {
  return Matrix6<Scalar>::Identity() - 2 * nu * nu.transpose() - 2 * F * F.transpose();
}

/// s = M^{-1} A M together with its core and the frame it was built from.
struct ScatterMatrix {
  Matrix6d s;
  Matrix6d A;
  Frame frame;
  FamilyKind kind = FamilyKind::Reflection;
  /// The extra reflected direction F_hat for the orientation-preserving family.
  std::optional<Vector6d> reflected_direction;
};

ScatterMatrix scattering_matrix(const ScatteringFamily& family, const Frame& frame);

/// Wraps an arbitrary core (e.g. the identity as a negative control). No
/// structural checks are made.
ScatterMatrix scatter_matrix_from_core(const Matrix6d& A, const Frame& frame, FamilyKind kind);

/// V . M nu_hat; negative for pre-collisional velocities.
double normal_velocity(const Frame& frame, const Vector6d& V);

struct ScatterResult {
  Vector6d V;
  bool grazing = false;
  double normal_pre = 0.0;   ///< V . M nu_hat before
  double normal_post = 0.0;  ///< V' . M nu_hat after
};

/// V' = s V. Rejects post-collisional input (V . M nu > grazing_tol |V|);
/// |V . M nu| <= grazing_tol |V| is accepted and flagged as grazing.
ScatterResult apply_scattering(const ScatterMatrix& sm, const Vector6d& V, double grazing_tol = 1e-9);

/// Impulse along the contact normal with
/// alpha = 2 (v + w p_perp - vbar - wbar q_perp) . n / Lambda,
/// Lambda = 2/m + (p_perp.n)^2/J + (q_perp.n)^2/J.
Vector6d impulse_scatter(const ContactData& contact, const MassProps& mass, const Vector6d& V);

/// Impulse parameter of impulse_scatter.
double impulse_parameter(const ContactData& contact, const MassProps& mass, const Vector6d& V);

/// Closed-form post-collisional velocities of the EPsi family.
Vector6d explicit_epsi_velocities(double psi, double d, const MassProps& mass, const Vector6d& V);

struct ScatterReport {
  int samples = 0;
  double involution = 0.0;        ///< max |s s V - V| / (1 + |V|)
  double symmetry = 0.0;          ///< max |A - A^T|
  double orthogonality = 0.0;     ///< max |A^T A - I|
  double linear_momentum = 0.0;   ///< max |E_i . (sV - V)| / (1 + |V|^2)
  double angular_momentum = 0.0;  ///< max |Gamma . (sV - V)| / (1 + |V|^2)
  double kinetic_energy = 0.0;    ///< max ||MsV|^2 - |MV|^2| / (1 + |V|^2)
  double determinant = 0.0;       ///< det s
  double eigen_structure = 0.0;   ///< max |A f - lambda f| over frame directions
  double flip = 0.0;              ///< max |nu.(sV) + nu.V| / (1 + |V|)
  bool flip_sign_ok = true;       ///< every pre-collisional V lands strictly post-collisional
  int grazing = 0;

  bool passes(int expected_orientation, double tol = 1e-10) const;
};

/// Samples standard-normal V (reflected into the pre-collisional half-space
/// for the flip check) and records the worst residual of every constraint.
ScatterReport verify_scattering(const ScatterMatrix& sm, int n_samples, std::uint64_t seed);

}  // namespace hardpair
