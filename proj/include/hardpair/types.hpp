#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hardpair {

template <typename Scalar> using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vector6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar> using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

using Vector2d = Vector2<double>;
using Vector6d = Vector6<double>;
using Matrix2d = Matrix2<double>;
using Matrix6d = Matrix6<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Invalid input or a violated precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unit vector e(psi) = (cos psi, sin psi).
template <typename Scalar>
Vector2<Scalar> unit_direction(Scalar psi) {
  using std::cos;
  using std::sin;
  return Vector2<Scalar>(cos(psi), sin(psi));
}

/// Counter-clockwise quarter turn: (a, b) -> (-b, a).
template <typename Derived>
Vector2<typename Derived::Scalar> perp(const Eigen::MatrixBase<Derived>& u) {
  return Vector2<typename Derived::Scalar>(-u(1), u(0));
}

template <typename Derived1, typename Derived2>
typename Derived1::Scalar cross(const Eigen::MatrixBase<Derived1>& a,
                                const Eigen::MatrixBase<Derived2>& b) {
  return a(0) * b(1) - a(1) * b(0);
}

template <typename Scalar>
Matrix2<Scalar> rotation(Scalar angle) {
  using std::cos;
  using std::sin;
  Matrix2<Scalar> r;
  r << cos(angle), -sin(angle), sin(angle), cos(angle);
  return r;
}

/// Acts as R(angle) on both linear-velocity blocks and as identity on the
/// angular block.
template <typename Scalar>
Matrix6<Scalar> block_rotation(Scalar angle) {
  Matrix6<Scalar> r = Matrix6<Scalar>::Identity();
  r.template block<2, 2>(0, 0) = rotation(angle);
  r.template block<2, 2>(2, 2) = rotation(angle);
  return r;
}

/// Reduces an angle to [0, 2pi).
inline double wrap_angle(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Smallest absolute difference between two angles modulo 2pi.
inline double angle_distance(double a, double b) {
  const double w = wrap_angle(a - b);
  return std::min(w, kTwoPi - w);
}

}  // namespace hardpair
