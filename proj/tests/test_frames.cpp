#include "doctest.h"

#include <random>

#include "hardpair/frame.hpp"

using namespace hardpair;

namespace {

Beta random_beta(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const double a = angle(rng), b = angle(rng), c = angle(rng);
  return Beta(a, b, c);
}

Vector6d vec(double a, double b, double c, double d, double e, double f) {
  Vector6d v;
  v << a, b, c, d, e, f;
  return v;
}

}  // namespace

TEST_CASE("momentum unit vectors") {
  CHECK((momentum_unit_x<double>() - vec(1, 0, 1, 0, 0, 0) / std::sqrt(2.0)).norm() == 0.0);
  CHECK((momentum_unit_y<double>() - vec(0, 1, 0, 1, 0, 0) / std::sqrt(2.0)).norm() == 0.0);
}

TEST_CASE("nu_hat on a unit-mass disk") {
  const Body disk = make_disk(1.0).with_mass_props({1.0, 1.0});
  const ContactData c = d_beta(disk, Beta(0.0, 0.0, 0.0));
  const Vector6d nu = nu_hat(c, disk.mass_props());
  CHECK((nu - vec(-1, 0, 1, 0, 0, 0) / std::sqrt(2.0)).norm() < 1e-10);

  const Body ell = make_ellipse(2.0, 1.0);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const Beta b = random_beta(rng);
    const Vector6d n = nu_hat(d_beta(ell, b), ell.mass_props());
    CHECK(std::abs(n.norm() - 1.0) < 1e-12);
    CHECK(std::abs(n.dot(momentum_unit_x<double>())) < 1e-10);
    CHECK(std::abs(n.dot(momentum_unit_y<double>())) < 1e-10);
  }
}

TEST_CASE("e_beta closed form") {
  CHECK((e_beta(0.3, 0.0, 1.0, 1.0) - vec(0, 0, 0, 0, 1, 1) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK((e_beta(0.0, 2.0, 1.0, 1.0) - vec(0, -1, 0, 1, 1, 1) / 2.0).norm() < 1e-15);
  CHECK_THROWS_AS(e_beta(0.0, -1.0, 1.0, 1.0), ValidationError);

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.1, 5.0), angle(0.0, kTwoPi);
  for (int i = 0; i < 200; ++i) {
    const double psi = angle(rng), d = u(rng), m = u(rng), J = u(rng);
    CHECK((e_beta(psi, d, m, J) - e_beta_gram_schmidt(psi, d, m, J)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("e_beta in extended precision") {
  using L = long double;
  const Vector6<L> a = e_beta<L>(L(0.7), L(3.1), L(2.0), L(1.5));
  const Vector6<L> b = e_beta_gram_schmidt<L>(L(0.7), L(3.1), L(2.0), L(1.5));
  CHECK(static_cast<double>((a - b).cwiseAbs().maxCoeff()) < 1e-17);
  CHECK(static_cast<double>(std::abs(a.norm() - L(1))) < 1e-17);
}

TEST_CASE("gamma unit vector") {
  const Vector6d g = gamma_unit(0.0, 2.0, 1.0, 1.0);
  CHECK((g - vec(0, 0, 0, 2, 1, 1) / std::sqrt(6.0)).norm() < 1e-15);
}

TEST_CASE("frame orthonormality") {
  std::mt19937_64 rng(31);
  const Body disk = make_disk(1.0), ell = make_ellipse(2.0, 1.0), oval = make_quartic_oval(2.0, 1.0, 0.5);
  for (int i = 0; i < 300; ++i) {
    const Body& body = i % 3 == 0 ? disk : (i % 3 == 1 ? ell : oval);
    const Frame f = build_frame(body, random_beta(rng));
    CHECK(orthonormality_residual(f) < 1e-10);
    CHECK(std::abs(f.stacked().determinant()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(f.nu.dot(f.Ebeta)) < 1e-5);
  }
}

TEST_CASE("complement basis on a unit-mass disk") {
  const Body disk = make_disk(1.0).with_mass_props({1.0, 1.0});
  const Frame f = build_frame(disk, Beta(0.0, 0.0, 0.0));
  CHECK(orthonormality_residual(f) < 1e-12);
  // Complement of {E1, E2, Ebeta, nu} at psi = 0: spanned by the y-relative
  // velocity mixed with spins, and the spin difference.
  const Matrix6d P = f.F1 * f.F1.transpose() + f.F2 * f.F2.transpose();
  const Vector6d spin_diff = vec(0, 0, 0, 0, 1, -1) / std::sqrt(2.0);
  CHECK((P * spin_diff - spin_diff).norm() < 1e-12);
}

TEST_CASE("complement projector is seed independent") {
  const Body ell = make_ellipse(2.0, 1.0);
  std::mt19937_64 rng(37);
  const std::array<int, 6> reversed = {5, 4, 3, 2, 1, 0};
  for (int i = 0; i < 50; ++i) {
    const Frame f = build_frame(ell, random_beta(rng));
    const auto [G1, G2] = complement_basis(f.E1, f.E2, f.Ebeta, f.nu, reversed);
    const Matrix6d P = f.F1 * f.F1.transpose() + f.F2 * f.F2.transpose();
    const Matrix6d Q = G1 * G1.transpose() + G2 * G2.transpose();
    CHECK((P - Q).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("complement basis rejects a degenerate input") {
  const Vector6d E1 = momentum_unit_x<double>();
  CHECK_THROWS_AS(complement_basis(E1, E1, E1, E1), ValidationError);
}

TEST_CASE("line field directions") {
  const Frame f = build_frame(make_ellipse(2.0, 1.0), Beta(0.2, 1.4, 2.9));
  CHECK((line_field_vector(f, LineField::constant(0.0)) - f.F1).norm() < 1e-15);
  CHECK((line_field_vector(f, LineField::constant(kPi / 2.0)) - f.F2).norm() < 1e-15);
  const Vector6d a = line_field_vector(f, LineField::constant(0.9));
  const Vector6d b = line_field_vector(f, LineField::constant(0.9 + kPi));
  CHECK((a * a.transpose() - b * b.transpose()).cwiseAbs().maxCoeff() < 1e-14);

  const LineField lf = LineField::fourier(0.5, {{1, 0, 0.2, 0.0}, {0, 2, 0.0, 0.1}});
  const double phi = lf(1.0, 2.0);
  CHECK(phi >= 0.0);
  CHECK(phi < kPi);
  CHECK(phi == doctest::Approx(std::fmod(0.5 + 0.2 * std::cos(1.0) + 0.1 * std::sin(4.0), kPi)));
}

TEST_CASE("frames are rotation covariant") {
  const Body ell = make_ellipse(2.0, 1.0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 50; ++i) {
    const Beta b = random_beta(rng);
    const double phi = angle(rng);
    const Frame f0 = build_frame(ell, b);
    const Frame f1 = build_frame(ell, Beta(b.theta + phi, b.thetabar + phi, b.psi + phi));
    const Matrix6d R = block_rotation(phi);
    CHECK((R * f0.nu - f1.nu).norm() < 1e-9);
    CHECK((R * f0.Ebeta - f1.Ebeta).norm() < 1e-9);
    CHECK((R * f0.F1 - f1.F1).norm() < 1e-9);
    CHECK((R * f0.F2 - f1.F2).norm() < 1e-9);
  }
}
