#include "doctest.h"

#include <random>

#include "hardpair/body.hpp"

using namespace hardpair;

TEST_CASE("disk mass properties") {
  const Body d1 = make_disk(1.0);
  CHECK(d1.mass() == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(d1.inertia() == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  const Body d2 = make_disk(2.0);
  CHECK(d2.mass() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(d2.inertia() == doctest::Approx(8.0 * kPi).epsilon(1e-12));
  CHECK_THROWS_AS(make_disk(0.0), ValidationError);
  CHECK_THROWS_AS(make_disk(-1.0), ValidationError);
}

TEST_CASE("ellipse mass properties and ordering") {
  const Body e = make_ellipse(2.0, 1.0);
  CHECK(e.mass() == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(e.inertia() == doctest::Approx(2.0 * kPi * 5.0 / 4.0).epsilon(1e-12));
  const Body round = make_ellipse(1.0, 1.0);
  CHECK(round.mass() == doctest::Approx(make_disk(1.0).mass()).epsilon(1e-12));
  CHECK(round.inertia() == doctest::Approx(make_disk(1.0).inertia()).epsilon(1e-12));
  CHECK_THROWS_AS(make_ellipse(1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(make_ellipse(1.0, 0.0), ValidationError);
}

TEST_CASE("boundary points and normals") {
  const Body disk = make_disk(1.0), ell = make_ellipse(2.0, 1.0);
  CHECK((boundary_point(disk, 0.0) - Vector2d(1.0, 0.0)).norm() < 1e-15);
  CHECK((boundary_point(ell, kPi / 2.0) - Vector2d(0.0, 1.0)).norm() < 1e-15);
  for (double s : {0.0, 0.4, 2.0, 5.5}) {
    CHECK((outward_normal(disk, s) - unit_direction(s)).norm() < 1e-15);
  }
  CHECK((outward_normal(ell, 0.0) - Vector2d(1.0, 0.0)).norm() < 1e-15);

  // Gradient direction of x^2/4 + y^2 at s = pi/4 and a central-difference
  // tangent.
  const double s = kPi / 4.0;
  const Vector2d y = ell.point(s);
  const Vector2d grad = Vector2d(y(0) / 2.0, 2.0 * y(1)).normalized();
  CHECK((outward_normal(ell, s) - grad).norm() < 1e-12);
  const double h = 1e-6;
  const Vector2d t = (ell.point(s + h) - ell.point(s - h)) / (2.0 * h);
  CHECK(std::abs(outward_normal(ell, s).dot(t.normalized())) < 1e-8);
}

TEST_CASE("sampled body invariants") {
  for (const Body& b : {make_disk(1.0), make_ellipse(2.0, 1.0), make_quartic_oval(2.0, 1.0, 0.5)}) {
    CAPTURE(b.describe());
    const BodyCheck c = check_body(b, 1000);
    CHECK(c.max_level_on_boundary < 1e-12);
    CHECK(c.max_normal_tangent_dot < 1e-8);
    CHECK(c.min_curvature > 0.0);
    CHECK(c.centroid_offset < 1e-8);
    CHECK(c.inside_negative);
    CHECK(c.outside_positive);
  }
}

TEST_CASE("implicit body boundary lies on the level set") {
  const Body oval = make_quartic_oval(2.0, 1.0, 0.5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 100; ++i) {
    const double s = angle(rng);
    CHECK(std::abs(oval.level(boundary_point(oval, s))) < 1e-12);
    CHECK(outward_normal(oval, s).dot(boundary_point(oval, s)) > 0.0);
  }
  CHECK(oval.mass() > 0.0);
  CHECK(oval.inertia() > 0.0);
}

TEST_CASE("implicit body rejects off-centre and non-convex shapes") {
  ImplicitShape shifted;
  shifted.name = "shifted disk";
  shifted.level = [](const Vector2d& y) { return (y - Vector2d(0.3, 0.0)).squaredNorm() - 1.0; };
  shifted.boundary = [](double s) { return Vector2d(0.3 + std::cos(s), std::sin(s)); };
  shifted.tangent = [](double s) { return Vector2d(-std::sin(s), std::cos(s)); };
  CHECK_THROWS_AS(make_implicit(shifted), ValidationError);

  // Peanut: r(s) = 1 + 0.5 cos(2s) has negative curvature at s = pi/2.
  ImplicitShape peanut;
  peanut.name = "peanut";
  auto r = [](double s) { return 1.0 + 0.5 * std::cos(2.0 * s); };
  peanut.level = [](const Vector2d& y) {
    const double s = std::atan2(y(1), y(0));
    return y.norm() - (1.0 + 0.5 * std::cos(2.0 * s));
  };
  peanut.boundary = [r](double s) { return Vector2d(r(s) * std::cos(s), r(s) * std::sin(s)); };
  peanut.tangent = [r](double s) {
    const double dr = -std::sin(2.0 * s);
    return Vector2d(dr * std::cos(s) - r(s) * std::sin(s), dr * std::sin(s) + r(s) * std::cos(s));
  };
  CHECK_THROWS_AS(make_implicit(peanut), ValidationError);
  CHECK_THROWS_AS(make_quartic_oval(2.0, 1.0, -0.5), ValidationError);
}

TEST_CASE("mass-inertia matrix") {
  const MassInertiaMatrix M = mass_inertia_matrix(make_disk(1.0));
  for (int i = 0; i < 4; ++i) CHECK(M.diagonal()(i) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  for (int i = 4; i < 6; ++i) CHECK(M.diagonal()(i) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-14));

  const Body unit = make_disk(1.0).with_mass_props({1.0, 1.0});
  CHECK((Matrix6d(mass_inertia_matrix(unit)) - Matrix6d::Identity()).norm() == 0.0);

  const Body e = make_ellipse(2.0, 1.0);
  const MassInertiaMatrix Me = mass_inertia_matrix(e);
  CHECK(Me.diagonal()(0) * Me.diagonal()(0) == doctest::Approx(e.mass()).epsilon(1e-14));
  CHECK(Me.diagonal()(5) * Me.diagonal()(5) == doctest::Approx(e.inertia()).epsilon(1e-14));
  CHECK_THROWS_AS(make_disk(1.0).with_mass_props({0.0, 1.0}), ValidationError);
}
