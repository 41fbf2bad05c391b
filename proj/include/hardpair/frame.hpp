#pragma once

#include <array>
#include <vector>

#include "hardpair/body.hpp"
#include "hardpair/geometry.hpp"

namespace hardpair {

// Conservation frame building blocks. All vectors live in the M-weighted
// velocity space W = M V.

template <typename Scalar>
Vector6<Scalar> momentum_unit_x() {
  using std::sqrt;
  Vector6<Scalar> e;
  e << 1, 0, 1, 0, 0, 0;
  return e / sqrt(Scalar(2));
}

template <typename Scalar>
Vector6<Scalar> momentum_unit_y() {
  using std::sqrt;
  Vector6<Scalar> e;
  e << 0, 1, 0, 1, 0, 0;
  return e / sqrt(Scalar(2));
}

/// Unit angular-momentum direction in unweighted velocity space:
/// (0, 0, m d e(psi)_perp, J, J) / sqrt(m^2 d^2 + 2 J^2).
template <typename Scalar>
Vector6<Scalar> gamma_unit(Scalar psi, Scalar d, Scalar m, Scalar J) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  Vector6<Scalar> g;
  g << 0, 0, -m * d * sin(psi), m * d * cos(psi), J, J;
  return g / sqrt(m * m * d * d + 2 * J * J);
}

/// Closed form of the angular-momentum direction after Gram-Schmidt against
/// the two momentum directions.
template <typename Scalar>
Vector6<Scalar> e_beta(Scalar psi, Scalar d, Scalar m, Scalar J) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (!(d >= Scalar(0))) throw ValidationError("e_beta needs d >= 0");
  const Scalar sm = sqrt(m), sj = sqrt(J);
  Vector6<Scalar> e;
  e << sm * d * sin(psi), -sm * d * cos(psi), -sm * d * sin(psi), sm * d * cos(psi), 2 * sj, 2 * sj;
  return e / sqrt(2 * m * d * d + 8 * J);
}

/// Same vector built the long way: weight Gamma by M^{-1}, then remove its
/// momentum components and normalize.
template <typename Scalar>
Vector6<Scalar> e_beta_gram_schmidt(Scalar psi, Scalar d, Scalar m, Scalar J) {
  using std::sqrt;
  Vector6<Scalar> w = gamma_unit(psi, d, m, J);
  w.template head<4>() /= sqrt(m);
  w.template tail<2>() /= sqrt(J);
  const Vector6<Scalar> e1 = momentum_unit_x<Scalar>();
  const Vector6<Scalar> e2 = momentum_unit_y<Scalar>();
  w -= w.dot(e1) * e1;
  w -= w.dot(e2) * e2;
  return w.normalized();
}

/// Unit collision normal in M-weighted velocity space:
/// M^{-1} (-n, n, -p_perp.n, q_perp.n) normalized.
Vector6d nu_hat(const ContactData& contact, const MassProps& mass);

/// Default seed order for the complement basis: e1, e3, e5, then the rest.
inline constexpr std::array<int, 6> kComplementSeeds = {0, 2, 4, 1, 3, 5};

/// Orthonormal basis of span{E1, E2, Ebeta, nu}^perp obtained by projecting
/// canonical seed vectors, in order, and keeping the first two whose
/// projections survive with norm > 1e-6.
template <typename Scalar>
std::pair<Vector6<Scalar>, Vector6<Scalar>> complement_basis(
    const Vector6<Scalar>& E1, const Vector6<Scalar>& E2, const Vector6<Scalar>& Ebeta,
    const Vector6<Scalar>& nu, const std::array<int, 6>& seeds = kComplementSeeds) {
  using std::abs;
  std::vector<Vector6<Scalar>> basis = {E1, E2, Ebeta, nu};
  for (std::size_t i = 0; i < 4; ++i) {
    if (abs(basis[i].norm() - Scalar(1)) > Scalar(1e-8)) throw ValidationError("complement_basis: input is not unit");
    for (std::size_t j = 0; j < i; ++j) {
      if (abs(basis[i].dot(basis[j])) > Scalar(1e-8)) {
        throw ValidationError("complement_basis: inputs are not orthogonal");
      }
    }
  }
  for (int idx : seeds) {
    Vector6<Scalar> w = Vector6<Scalar>::Unit(idx);
    // Two passes of modified Gram-Schmidt keep the result orthogonal to
    // rounding level.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= w.dot(b) * b;
    }
    if (w.norm() > Scalar(1e-6)) {
      basis.push_back(w.normalized());
      if (basis.size() == 6) return {basis[4], basis[5]};
    }
  }
  throw ValidationError("degenerate complement: conservation frame is not rank 4");
}

/// A continuous choice of line (point of RP^1) per relative configuration
/// (theta_rel, psi_rel). Evaluates to an angle in [0, pi).
class LineField {
 public:
  struct Term {
    int k = 0;  ///< frequency in theta_rel
    int l = 0;  ///< frequency in psi_rel
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
  };

  static LineField constant(double phi);
  /// phi = phi0 + sum cos_coeff cos(k theta + l psi) + sin_coeff sin(k theta + l psi).
  static LineField fourier(double phi0, std::vector<Term> terms);

  double operator()(double theta_rel, double psi_rel) const;

  bool is_constant() const { return terms_.empty(); }
  double offset() const { return phi0_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  double phi0_ = 0.0;
  std::vector<Term> terms_;
};

/// The orthonormal system {E1, E2, Ebeta, nu, F1, F2} at a lab-frame
/// collision configuration. F1, F2 are built in the reference pose
/// (first body unrotated) and rotated into the lab, so frames at beta and at
/// beta + (a, a, a) are block-rotations of each other.
struct Frame {
  Vector6d E1, E2, Ebeta, nu, F1, F2;
  Vector6d Gamma;  ///< unit angular-momentum direction (unweighted)
  MassProps mass;
  double d = 0.0;
  double psi = 0.0;
  double theta = 0.0;
  double theta_rel = 0.0;
  double psi_rel = 0.0;

  Matrix6d stacked() const;
};

Frame build_frame(const ContactData& lab_contact, const Beta& beta, const MassProps& mass);
Frame build_frame(const Body& body, const Beta& beta, const ContactOptions& opts = {});

/// Max of |1 - |v|| over the six vectors and |a.b| over the 15 pairs.
double orthonormality_residual(const Frame& frame);

/// cos(phi) F1 + sin(phi) F2 with phi = lf(theta_rel, psi_rel).
Vector6d line_field_vector(const Frame& frame, const LineField& lf);

}  // namespace hardpair
