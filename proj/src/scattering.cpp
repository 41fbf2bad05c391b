#include "hardpair/scattering.hpp"

#include <random>
#include <sstream>

namespace hardpair {

std::string ScatteringFamily::name() const {
  switch (kind) {
    case FamilyKind::Reflection:
      return "reflection";
    case FamilyKind::EPsi:
      return "epsi";
    case FamilyKind::OrientationPreserving: {
      std::ostringstream os;
      os.precision(17);
      if (line_field.is_constant()) {
        os << "op(phi=" << line_field.offset() << ")";
      } else {
        os << "op(fourier, " << line_field.terms().size() << " terms)";
      }
      return os.str();
    }
  }
  return "unknown";
}

namespace {

ScatterMatrix assemble(const Matrix6d& A, const Frame& frame, FamilyKind kind) {
  const MassInertiaMatrix M = mass_inertia_matrix(frame.mass);
  ScatterMatrix sm;
  sm.A = A;
  sm.s = M.inverse() * A * M;
  sm.frame = frame;
  sm.kind = kind;
  return sm;
}

}  // namespace

ScatterMatrix scattering_matrix(const ScatteringFamily& family, const Frame& frame) {
  const double residual = orthonormality_residual(frame);
  if (!(residual <= 1e-8)) {
    throw ValidationError("frame is not orthonormal (residual " + std::to_string(residual) + ")");
  }
  switch (family.kind) {
    case FamilyKind::Reflection:
      return assemble(reflection_core(frame.nu), frame, family.kind);
    case FamilyKind::EPsi:
      return assemble(epsi_core(frame.E1, frame.E2, frame.Ebeta), frame, family.kind);
    case FamilyKind::OrientationPreserving: {
      const Vector6d F = line_field_vector(frame, family.line_field);
      ScatterMatrix sm = assemble(orientation_preserving_core(frame.nu, F), frame, family.kind);
      sm.reflected_direction = F;
      return sm;
    }
  }
  throw ValidationError("unknown scattering family");
}

ScatterMatrix scatter_matrix_from_core(const Matrix6d& A, const Frame& frame, FamilyKind kind) {
  return assemble(A, frame, kind);
}

double normal_velocity(const Frame& frame, const Vector6d& V) {
  return (mass_inertia_matrix(frame.mass) * V).dot(frame.nu);
}

ScatterResult apply_scattering(const ScatterMatrix& sm, const Vector6d& V, double grazing_tol) {
  ScatterResult out;
  out.normal_pre = normal_velocity(sm.frame, V);
  const double band = grazing_tol * V.norm();
  if (out.normal_pre > band) {
    std::ostringstream os;
    os << "velocity is post-collisional: V.M nu = " << out.normal_pre << " > " << band;
    throw ValidationError(os.str());
  }
  out.grazing = std::abs(out.normal_pre) <= band;
  out.V = sm.s * V;
  out.normal_post = normal_velocity(sm.frame, out.V);
  return out;
}

double impulse_parameter(const ContactData& c, const MassProps& mass, const Vector6d& V) {
  const Vector2d v = V.segment<2>(0), vbar = V.segment<2>(2);
  const double w = V(4), wbar = V(5);
  const double pn = perp(c.p).dot(c.n), qn = perp(c.q).dot(c.n);
  const double lambda = 2.0 / mass.m + pn * pn / mass.J + qn * qn / mass.J;
  return 2.0 * (v + w * perp(c.p) - vbar - wbar * perp(c.q)).dot(c.n) / lambda;
}

Vector6d impulse_scatter(const ContactData& c, const MassProps& mass, const Vector6d& V) {
  const double alpha = impulse_parameter(c, mass, V);
  const double pn = perp(c.p).dot(c.n), qn = perp(c.q).dot(c.n);
  Vector6d out;
  out.segment<2>(0) = V.segment<2>(0) - alpha * c.n / mass.m;
  out.segment<2>(2) = V.segment<2>(2) + alpha * c.n / mass.m;
  out(4) = V(4) - alpha * pn / mass.J;
  out(5) = V(5) + alpha * qn / mass.J;
  return out;
}

Vector6d explicit_epsi_velocities(double psi, double d, const MassProps& mass, const Vector6d& V) {
  const double m = mass.m, J = mass.J;
  const Vector2d ep = perp(unit_direction(psi));
  const Vector2d v = V.segment<2>(0), vbar = V.segment<2>(2);
  const double w = V(4), wbar = V(5);
  const double bracket = (m * d * v - 2.0 * J * w * ep - m * d * vbar - 2.0 * J * wbar * ep).dot(ep);
  const double denom = m * d * d + 4.0 * J;
  Vector6d out;
  out.segment<2>(0) = vbar + (d / denom) * bracket * ep;
  out.segment<2>(2) = v - (d / denom) * bracket * ep;
  out(4) = -w - (2.0 / denom) * bracket;
  out(5) = -wbar - (2.0 / denom) * bracket;
  return out;
}

bool ScatterReport::passes(int expected_orientation, double tol) const {
  const bool det_ok = std::abs(std::abs(determinant) - 1.0) < tol &&
                      (determinant > 0.0) == (expected_orientation > 0);
  return involution < tol && symmetry < tol && orthogonality < tol && linear_momentum < tol &&
         angular_momentum < tol && kinetic_energy < tol && eigen_structure < tol && flip < tol &&
         flip_sign_ok && det_ok;
}

ScatterReport verify_scattering(const ScatterMatrix& sm, int n_samples, std::uint64_t seed) {
  const Frame& f = sm.frame;
  const MassInertiaMatrix M = mass_inertia_matrix(f.mass);
  ScatterReport r;
  r.samples = n_samples;
  r.symmetry = (sm.A - sm.A.transpose()).cwiseAbs().maxCoeff();
  r.orthogonality = (sm.A.transpose() * sm.A - Matrix6d::Identity()).cwiseAbs().maxCoeff();
  r.determinant = sm.s.determinant();

  std::vector<std::pair<Vector6d, double>> expected = {{f.E1, 1.0}, {f.E2, 1.0}, {f.Ebeta, 1.0}, {f.nu, -1.0}};
  switch (sm.kind) {
    case FamilyKind::Reflection:
      expected.push_back({f.F1, 1.0});
      expected.push_back({f.F2, 1.0});
      break;
    case FamilyKind::EPsi:
      expected.push_back({f.F1, -1.0});
      expected.push_back({f.F2, -1.0});
      break;
    case FamilyKind::OrientationPreserving:
      if (sm.reflected_direction) {
        const Vector6d& F = *sm.reflected_direction;
        const Vector6d G = (f.F1.dot(F) * f.F2 - f.F2.dot(F) * f.F1).normalized();
        expected.push_back({F, -1.0});
        expected.push_back({G, 1.0});
      }
      break;
  }
  for (const auto& [vec, lambda] : expected) {
    r.eigen_structure = std::max(r.eigen_structure, (sm.A * vec - lambda * vec).cwiseAbs().maxCoeff());
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < n_samples; ++i) {
    Vector6d V;
    for (int k = 0; k < 6; ++k) V(k) = normal(rng);
    const double c = normal_velocity(f, V);
    if (c > 0.0) V = -V;
    const Vector6d Vp = sm.s * V;
    const double scale2 = 1.0 + V.squaredNorm();
    const double scale1 = 1.0 + V.norm();

    r.involution = std::max(r.involution, (sm.s * Vp - V).norm() / scale1);
    const Vector6d dV = Vp - V;
    r.linear_momentum = std::max({r.linear_momentum, std::abs(f.E1.dot(dV)) / scale2,
                                  std::abs(f.E2.dot(dV)) / scale2});
    r.angular_momentum = std::max(r.angular_momentum, std::abs(f.Gamma.dot(dV)) / scale2);
    r.kinetic_energy = std::max(r.kinetic_energy,
                                std::abs((M * Vp).squaredNorm() - (M * V).squaredNorm()) / scale2);

    const double pre = normal_velocity(f, V);
    const double post = normal_velocity(f, Vp);
    r.flip = std::max(r.flip, std::abs(post + pre) / scale1);
    if (std::abs(pre) <= 1e-9 * V.norm()) {
      ++r.grazing;
    } else if (!(post > 0.0)) {
      r.flip_sign_ok = false;
    }
  }
  return r;
}

}  // namespace hardpair
