#include "hardpair/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <vector>

namespace hardpair {

namespace {

constexpr int kOracleSamples = 2048;
constexpr double kNormalStep = 1e-6;

struct TangencySystem {
  const Body& body;
  Matrix2d rot;
  Vector2d e;

  Eigen::Vector3d residual(const Eigen::Vector3d& x) const {
    const Vector2d gap = body.point(x(0)) - rot * body.point(x(1)) - x(2) * e;
    Eigen::Vector3d f;
    f << gap, cross(body.normal(x(0)), rot * body.normal(x(1)));
    return f;
  }

  Eigen::Matrix3d jacobian(const Eigen::Vector3d& x) const {
    const Vector2d n1 = body.normal(x(0));
    const Vector2d n2 = rot * body.normal(x(1));
    const Vector2d dn1 = (body.normal(x(0) + kNormalStep) - body.normal(x(0) - kNormalStep)) /
                         (2.0 * kNormalStep);
    const Vector2d dn2 = rot * (body.normal(x(1) + kNormalStep) - body.normal(x(1) - kNormalStep)) /
                         (2.0 * kNormalStep);
    Eigen::Matrix3d jac;
    jac.block<2, 1>(0, 0) = body.tangent(x(0));
    jac.block<2, 1>(0, 1) = -(rot * body.tangent(x(1)));
    jac.block<2, 1>(0, 2) = -e;
    jac(2, 0) = cross(dn1, n2);
    jac(2, 1) = cross(n1, dn2);
    jac(2, 2) = 0.0;
    return jac;
  }
};

// Smallest level value of `body` over the image of the other body's boundary
// under y -> rot * y + shift, polished by golden-section search around the
// best of the sampled points.
double min_level_over_boundary(const Body& body, const Matrix2d& rot, const Vector2d& shift) {
  const double ds = kTwoPi / kOracleSamples;
  auto f = [&](double s) { return body.level(rot * body.point(s) + shift); };
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kOracleSamples; ++i) {
    const double v = f(i * ds);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best - 1) * ds, hi = (best + 1) * ds;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({best_value, f1, f2});
}

bool bodies_overlap(const Body& body, const Matrix2d& rot, const Vector2d& e, double d) {
  const double second_in_first = min_level_over_boundary(body, rot, d * e);
  if (second_in_first < 0.0) return true;
  const double first_in_second =
      min_level_over_boundary(body, rot.transpose(), -(rot.transpose() * (d * e)));
  return first_in_second < 0.0;
}

std::pair<double, double> oracle_bracket(const Body& body, double theta_rel, double psi_rel,
                                         double tol) {
  const Matrix2d rot = rotation(theta_rel);
  const Vector2d e = unit_direction(psi_rel);
  double lo = 1e-3 * body.diameter();
  double hi = 4.0 * body.diameter();
  if (!bodies_overlap(body, rot, e, lo) || bodies_overlap(body, rot, e, hi)) {
    std::ostringstream os;
    os << "closest-approach bracket not found in (0, " << hi << "] for theta=" << theta_rel
       << " psi=" << psi_rel;
    throw ConvergenceError(os.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (bodies_overlap(body, rot, e, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

ContactData fallback_contact(const Body& body, double theta_rel, double psi_rel,
                             const ContactOptions& opts, const std::string& why) {
  std::pair<double, double> bracket;
  try {
    bracket = oracle_bracket(body, theta_rel, psi_rel, opts.fallback_tolerance);
  } catch (const ConvergenceError& err) {
    throw ConvergenceError("closest approach failed (" + why + "); fallback: " + err.what());
  }
  const double d = 0.5 * (bracket.first + bracket.second);
  const Matrix2d rot = rotation(theta_rel);
  const Vector2d e = unit_direction(psi_rel);

  const double ds = kTwoPi / kOracleSamples;
  double s2 = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kOracleSamples; ++i) {
    const double v = body.level(rot * body.point(i * ds) + d * e);
    if (v < best) {
      best = v;
      s2 = i * ds;
    }
  }
  const Vector2d p = rot * body.point(s2) + d * e;
  double s1 = 0.0;
  best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kOracleSamples; ++i) {
    const double dist = (body.point(i * ds) - p).squaredNorm();
    if (dist < best) {
      best = dist;
      s1 = i * ds;
    }
  }
  ContactData c;
  c.d = d;
  c.p = p;
  c.q = p - d * e;
  c.n = body.normal(s1);
  c.psi = psi_rel;
  c.s1 = s1;
  c.s2 = s2;
  c.used_fallback = true;
  return c;
}

}  // namespace

ContactData closest_approach(const Body& body, double theta_rel, double psi_rel,
                             const ContactOptions& opts) {
  theta_rel = wrap_angle(theta_rel);
  psi_rel = wrap_angle(psi_rel);
  if (body.kind() == BodyKind::Disk) {
    ContactData c;
    const Vector2d e = unit_direction(psi_rel);
    c.d = 2.0 * body.radius();
    c.p = body.radius() * e;
    c.q = -body.radius() * e;
    c.n = e;
    c.psi = psi_rel;
    c.s1 = psi_rel;
    c.s2 = wrap_angle(psi_rel + kPi - theta_rel);
    return c;
  }
  const double scale = std::max(1.0, body.diameter());
  const TangencySystem sys{body, rotation(theta_rel), unit_direction(psi_rel)};

  // Coarse scan: pair each sample on the first body with the most
  // antiparallel normal on the second, keep the pair best aligned with e.
  const int k = std::max(8, opts.scan_points);
  const double ds = kTwoPi / k;
  std::vector<Vector2d> p2(k), n2(k);
  for (int j = 0; j < k; ++j) {
    p2[j] = sys.rot * body.point(j * ds);
    n2[j] = sys.rot * body.normal(j * ds);
  }
  Eigen::Vector3d x(0.0, 0.0, body.diameter());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const Vector2d n1 = body.normal(i * ds);
    int jbest = 0;
    double dot_best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      const double dot = n1.dot(n2[j]);
      if (dot < dot_best) {
        dot_best = dot;
        jbest = j;
      }
    }
    const Vector2d w = body.point(i * ds) - p2[jbest];
    const double d = w.dot(sys.e);
    const double off = std::abs(cross(w, sys.e));
    if (d > 0.0 && off < best) {
      best = off;
      x << i * ds, jbest * ds, d;
    }
  }

  Eigen::Vector3d f = sys.residual(x);
  double fnorm = f.norm();
  int it = 0;
  for (; it < opts.max_iterations && fnorm > opts.residual_tolerance * scale; ++it) {
    const Eigen::Vector3d step = sys.jacobian(x).partialPivLu().solve(-f);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    Eigen::Vector3d trial = x + step;
    Eigen::Vector3d ftrial = sys.residual(trial);
    for (int halvings = 0; halvings < 30 && !(ftrial.norm() < fnorm); ++halvings) {
      lambda *= opts.damping;
      trial = x + lambda * step;
      ftrial = sys.residual(trial);
    }
    if (!(ftrial.norm() < fnorm)) break;  // stagnated at rounding level
    x = trial;
    f = ftrial;
    fnorm = f.norm();
  }

  const bool antiparallel = body.normal(x(0)).dot(sys.rot * body.normal(x(1))) < 0.0;
  if (!(fnorm <= 1e-11 * scale) || !(x(2) > 0.0) || !antiparallel) {
    std::ostringstream why;
    why << "Newton residual " << fnorm << " after " << it << " iterations";
    return fallback_contact(body, theta_rel, psi_rel, opts, why.str());
  }

  ContactData c;
  c.d = x(2);
  c.s1 = wrap_angle(x(0));
  c.s2 = wrap_angle(x(1));
  c.p = body.point(c.s1);
  c.q = c.p - c.d * sys.e;
  c.n = body.normal(c.s1);
  c.psi = psi_rel;
  c.iterations = it;
  return c;
}

double closest_approach_oracle(const Body& body, double theta_rel, double psi_rel, double tol) {
  if (!(tol > 0.0)) throw ValidationError("oracle tolerance must be positive");
  const auto [lo, hi] = oracle_bracket(body, wrap_angle(theta_rel), wrap_angle(psi_rel), tol);
  return 0.5 * (lo + hi);
}

ContactData d_beta(const Body& body, const Beta& beta, const ContactOptions& opts) {
  ContactData c = closest_approach(body, beta.theta_rel(), beta.psi_rel(), opts);
  const Matrix2d rot = rotation(beta.theta);
  c.p = rot * c.p;
  c.q = rot * c.q;
  c.n = rot * c.n;
  c.psi = beta.psi;
  return c;
}

DDerivatives d_derivatives(const Body& body, double theta_rel, double psi_rel, double h,
                           const ContactOptions& opts) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw ValidationError("derivative step must lie in [1e-7, 1e-3]");
  auto D = [&](double a, double b) { return closest_approach(body, a, b, opts).d; };
  auto central = [&](double step) {
    return DDerivatives{(D(theta_rel + step, psi_rel) - D(theta_rel - step, psi_rel)) / (2.0 * step),
                        (D(theta_rel, psi_rel + step) - D(theta_rel, psi_rel - step)) / (2.0 * step)};
  };
  const DDerivatives coarse = central(h);
  const DDerivatives fine = central(0.5 * h);
  return {(4.0 * fine.dtheta - coarse.dtheta) / 3.0, (4.0 * fine.dpsi - coarse.dpsi) / 3.0};
}

Vector6d gamma_hat(const ContactData& contact) {
  if (!contact.derivatives) {
    throw ValidationError("gamma_hat needs contact data with D-derivatives");
  }
  const DDerivatives& dd = *contact.derivatives;
  const Vector2d e = unit_direction(contact.psi);
  const Vector2d lateral = e - (dd.dpsi / contact.d) * perp(e);
  Vector6d g;
  g << -lateral, lateral, dd.dtheta + dd.dpsi, -dd.dtheta;
  return g.normalized();
}

Vector6d gamma_hat(const Body& body, const Beta& beta, double h) {
  ContactData c = d_beta(body, beta);
  c.derivatives = d_derivatives(body, beta.theta_rel(), beta.psi_rel(), h);
  return gamma_hat(c);
}

Vector6d contact_normal_block(const ContactData& c) {
  Vector6d u;
  u << -c.n, c.n, -perp(c.p).dot(c.n), perp(c.q).dot(c.n);
  return u;
}

namespace {

// Angle between the lines spanned by a and b, in [0, pi/2].
double line_angle(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  const Eigen::VectorXd ua = a.normalized();
  const Eigen::VectorXd ub = b.normalized();
  const double c = ua.dot(ub);
  return std::atan2((ua - c * ub).norm(), std::abs(c));
}

}  // namespace

IdentityResiduals identity_residuals(const Body& body, const Beta& beta, double h) {
  ContactData c = d_beta(body, beta);
  const DDerivatives dd = d_derivatives(body, beta.theta_rel(), beta.psi_rel(), h);
  c.derivatives = dd;

  const Vector2d e = unit_direction(c.psi);
  const Vector2d ep = perp(e);
  IdentityResiduals r;

  const double slope = dd.dpsi / c.d;
  r.normal_direction = line_angle(c.n, e - slope * ep);

  const double rhs = -(dd.dtheta + dd.dpsi) / std::sqrt(1.0 + slope * slope);
  r.moment_arm = std::abs(perp(c.p).dot(c.n) - rhs) / (1.0 + std::abs(rhs));

  const Vector6d u = contact_normal_block(c);
  r.gamma_collinearity = line_angle(u, gamma_hat(c));

  const double dtheta_slope = dd.dtheta / c.d;
  r.normal_direction_dtheta = line_angle(c.n, e - dtheta_slope * ep);
  Vector6d alt;
  alt << -e + dtheta_slope * ep, e - dtheta_slope * ep, -(dd.dtheta + dd.dpsi), dd.dtheta;
  r.gamma_collinearity_dtheta = line_angle(u, alt);
  return r;
}

}  // namespace hardpair
