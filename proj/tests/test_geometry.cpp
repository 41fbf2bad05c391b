#include "doctest.h"

#include <random>

#include "hardpair/frame.hpp"
#include "hardpair/geometry.hpp"

using namespace hardpair;

namespace {

Beta random_beta(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const double a = angle(rng), b = angle(rng), c = angle(rng);
  return Beta(a, b, c);
}

// Contact-data invariants in the lab frame.
void check_contact(const Body& body, const Beta& beta, const ContactData& c) {
  const Vector2d e = unit_direction(beta.psi);
  CHECK(std::abs(c.n.norm() - 1.0) < 1e-12);
  CHECK((c.p - c.q - c.d * e).norm() < 1e-10);
  // p on both boundaries, in each body's frame.
  const Vector2d y1 = rotation(-beta.theta) * c.p;
  const Vector2d y2 = rotation(-beta.thetabar) * c.q;
  CHECK(std::abs(body.level(y1)) < 1e-8);
  CHECK(std::abs(body.level(y2)) < 1e-8);
  const Vector2d n2 = rotation(beta.thetabar) * body.normal(c.s2);
  CHECK((c.n + n2).norm() < 1e-8);
}

}  // namespace

TEST_CASE("beta wraps angles") {
  const Beta b(-0.5, 7.0, kTwoPi);
  CHECK(b.theta == doctest::Approx(kTwoPi - 0.5));
  CHECK(b.thetabar == doctest::Approx(7.0 - kTwoPi));
  CHECK(b.psi == doctest::Approx(0.0));
  CHECK(b.theta_rel() == doctest::Approx(wrap_angle(7.0 + 0.5)));
}

TEST_CASE("disk contact is the midpoint") {
  const Body disk = make_disk(1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 20; ++i) {
    const double th = angle(rng), ps = angle(rng);
    const ContactData c = closest_approach(disk, th, ps);
    const Vector2d e = unit_direction(ps);
    CHECK(std::abs(c.d - 2.0) < 1e-10);
    CHECK((c.n - e).norm() < 1e-10);
    CHECK((c.p - e).norm() < 1e-10);
    CHECK((c.q + e).norm() < 1e-10);
  }
}

TEST_CASE("Newton path on a round ellipse matches the disk") {
  const Body round = make_ellipse(1.0, 1.0);
  for (double ps : {0.0, 0.9, 3.3}) {
    const ContactData c = closest_approach(round, 1.2, ps);
    CHECK_FALSE(c.used_fallback);
    CHECK(std::abs(c.d - 2.0) < 1e-10);
    CHECK((c.n - unit_direction(ps)).norm() < 1e-8);
  }
}

TEST_CASE("coaxial ellipses touch tip to tip") {
  const ContactData c = closest_approach(make_ellipse(2.0, 1.0), 0.0, 0.0);
  CHECK(c.d == doctest::Approx(4.0).epsilon(1e-12));
  CHECK((c.p - Vector2d(2.0, 0.0)).norm() < 1e-10);
  CHECK((c.n - Vector2d(1.0, 0.0)).norm() < 1e-10);
}

TEST_CASE("oracle agrees with Newton") {
  const Body ell = make_ellipse(2.0, 1.0);
  CHECK(std::abs(closest_approach(ell, kPi / 3.0, kPi / 4.0).d -
                 closest_approach_oracle(ell, kPi / 3.0, kPi / 4.0)) < 1e-6);
  CHECK(closest_approach_oracle(make_disk(1.0), 0.7, 1.9) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(closest_approach_oracle(ell, 0.0, kPi / 2.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(closest_approach_oracle(ell, kPi / 2.0, 0.0) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK_THROWS_AS(closest_approach_oracle(ell, 0.0, 0.0, 0.0), ValidationError);

  const Body oval = make_quartic_oval(2.0, 1.0, 0.5);
  for (double th : {0.3, 1.7}) {
    for (double ps : {0.2, 2.5, 4.0}) {
      CHECK(std::abs(closest_approach(oval, th, ps).d - closest_approach_oracle(oval, th, ps)) < 1e-6);
    }
  }
}

TEST_CASE("lab contact data and rotation covariance") {
  const Body ell = make_ellipse(2.0, 1.0);
  const ContactData ref = closest_approach(ell, 0.0, 1.1);
  const ContactData lab = d_beta(ell, Beta(0.0, 0.0, 1.1));
  CHECK(std::abs(ref.d - lab.d) < 1e-14);
  CHECK((ref.p - lab.p).norm() < 1e-14);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 100; ++i) {
    const Beta b = random_beta(rng);
    const double phi = angle(rng);
    const ContactData c0 = d_beta(ell, b);
    const ContactData c1 = d_beta(ell, Beta(b.theta + phi, b.thetabar + phi, b.psi + phi));
    CHECK(std::abs(c0.d - c1.d) < 1e-10);
    CHECK((rotation(phi) * c0.p - c1.p).norm() < 1e-9);
    CHECK((rotation(phi) * c0.n - c1.n).norm() < 1e-9);
    if (i < 20) check_contact(ell, b, c0);
  }
}

TEST_CASE("reflection symmetry of D") {
  const Body ell = make_ellipse(2.0, 1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 20; ++i) {
    const double th = angle(rng), ps = angle(rng);
    CHECK(std::abs(closest_approach(ell, th, ps).d - closest_approach(ell, -th, -ps).d) < 1e-8);
  }
}

TEST_CASE("derivatives of D") {
  const DDerivatives disk = d_derivatives(make_disk(1.0), 0.4, 1.3);
  CHECK(std::abs(disk.dtheta) < 1e-7);
  CHECK(std::abs(disk.dpsi) < 1e-7);

  const Body ell = make_ellipse(2.0, 1.0);
  CHECK(std::abs(d_derivatives(ell, 0.0, 0.0).dpsi) < 1e-6);

  const DDerivatives a = d_derivatives(ell, kPi / 3.0, kPi / 4.0, 1e-5);
  const DDerivatives b = d_derivatives(ell, kPi / 3.0, kPi / 4.0, 0.5e-5);
  CHECK(std::abs(a.dtheta - b.dtheta) < 1e-6);
  CHECK(std::abs(a.dpsi - b.dpsi) < 1e-6);

  CHECK_THROWS_AS(d_derivatives(ell, 0.1, 0.2, 1e-9), ValidationError);
  CHECK_THROWS_AS(d_derivatives(ell, 0.1, 0.2, 1e-2), ValidationError);
}

TEST_CASE("gamma_hat") {
  Vector6d expected;
  expected << -1.0, 0.0, 1.0, 0.0, 0.0, 0.0;
  expected /= std::sqrt(2.0);
  CHECK((gamma_hat(make_disk(1.0), Beta(0.0, 0.0, 0.0)) - expected).norm() < 1e-9);

  const Body ell = make_ellipse(2.0, 1.0);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const Beta b = random_beta(rng);
    const Vector6d g = gamma_hat(ell, b);
    CHECK(std::abs(g.norm() - 1.0) < 1e-12);
    // Outward: pushing the centres apart increases the gap.
    const ContactData c = d_beta(ell, b);
    CHECK(g.segment<2>(2).dot(unit_direction(c.psi)) > 0.0);
  }
  ContactData bare = d_beta(ell, Beta(0.1, 0.2, 0.3));
  bare.derivatives.reset();
  CHECK_THROWS_AS(gamma_hat(bare), ValidationError);
}

TEST_CASE("identity residuals") {
  std::mt19937_64 rng(17);
  const Body disk = make_disk(1.0), ell = make_ellipse(2.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Beta b = random_beta(rng);
    const IdentityResiduals d = identity_residuals(disk, b);
    CHECK(d.normal_direction < 1e-10);
    CHECK(d.moment_arm < 1e-10);
    CHECK(d.gamma_collinearity < 1e-10);
    const IdentityResiduals e = identity_residuals(ell, b, 1e-5);
    CHECK(e.normal_direction < 1e-5);
    CHECK(e.moment_arm < 1e-5);
    CHECK(e.gamma_collinearity < 1e-5);
  }
  const ContactData tip = d_beta(ell, Beta(0.0, 0.0, 0.0));
  CHECK(std::abs(perp(tip.p).dot(tip.n)) < 1e-8);
}

TEST_CASE("identities hold on a non-elliptic body") {
  const Body oval = make_quartic_oval(2.0, 1.0, 0.5);
  std::mt19937_64 rng(19);
  for (int i = 0; i < 10; ++i) {
    const IdentityResiduals r = identity_residuals(oval, random_beta(rng), 1e-5);
    CHECK(r.normal_direction < 1e-5);
    CHECK(r.gamma_collinearity < 1e-5);
  }
}
