#include "hardpair/frame.hpp"

namespace hardpair {

Vector6d nu_hat(const ContactData& contact, const MassProps& mass) {
  const Vector6d u = contact_normal_block(contact);
  const double pn = u(4), qn = u(5);
  const double norm = std::sqrt(2.0 / mass.m + pn * pn / mass.J + qn * qn / mass.J);
  return mass_inertia_matrix(mass).inverse() * u / norm;
}

LineField LineField::constant(double phi) {
  LineField lf;
  lf.phi0_ = phi;
  return lf;
}

LineField LineField::fourier(double phi0, std::vector<Term> terms) {
  LineField lf;
  lf.phi0_ = phi0;
  lf.terms_ = std::move(terms);
  return lf;
}

double LineField::operator()(double theta_rel, double psi_rel) const {
  double phi = phi0_;
  for (const Term& t : terms_) {
    const double arg = t.k * theta_rel + t.l * psi_rel;
    phi += t.cos_coeff * std::cos(arg) + t.sin_coeff * std::sin(arg);
  }
  double w = std::fmod(phi, kPi);
  if (w < 0.0) w += kPi;
  return w;
}

Matrix6d Frame::stacked() const {
  Matrix6d s;
  s << E1, E2, Ebeta, nu, F1, F2;
  return s;
}

Frame build_frame(const ContactData& c, const Beta& beta, const MassProps& mass) {
  Frame f;
  f.mass = mass;
  f.d = c.d;
  f.psi = beta.psi;
  f.theta = beta.theta;
  f.theta_rel = beta.theta_rel();
  f.psi_rel = beta.psi_rel();

  f.E1 = momentum_unit_x<double>();
  f.E2 = momentum_unit_y<double>();
  f.Ebeta = e_beta(beta.psi, c.d, mass.m, mass.J);
  f.nu = nu_hat(c, mass);
  f.Gamma = gamma_unit(beta.psi, c.d, mass.m, mass.J);

  const Matrix6d to_reference = block_rotation(-beta.theta);
  const auto [F1, F2] = complement_basis<double>(f.E1, f.E2, to_reference * f.Ebeta, to_reference * f.nu);
  const Matrix6d to_lab = block_rotation(beta.theta);
  f.F1 = to_lab * F1;
  f.F2 = to_lab * F2;
  return f;
}

Frame build_frame(const Body& body, const Beta& beta, const ContactOptions& opts) {
  return build_frame(d_beta(body, beta, opts), beta, body.mass_props());
}

double orthonormality_residual(const Frame& frame) {
  const Matrix6d s = frame.stacked();
  return (s.transpose() * s - Matrix6d::Identity()).cwiseAbs().maxCoeff();
}

Vector6d line_field_vector(const Frame& frame, const LineField& lf) {
  const double phi = lf(frame.theta_rel, frame.psi_rel);
  return std::cos(phi) * frame.F1 + std::sin(phi) * frame.F2;
}

}  // namespace hardpair
