#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hardpair/scattering.hpp"

namespace hardpair {

enum class InvariantKind { Constant, MomentumX, MomentumY, KineticEnergy, AngularSpeed, ThetaFunction, Custom };

/// Single-particle function phi(v, w, theta) tested for the two-particle
/// collision-invariant property.
struct InvariantCandidate {
  std::string name;
  InvariantKind kind = InvariantKind::Custom;
  std::function<double(const Vector2d& v, double w, double theta)> phi;

  static InvariantCandidate constant();
  static InvariantCandidate momentum_x();
  static InvariantCandidate momentum_y();
  /// m |v|^2 + J w^2.
  static InvariantCandidate kinetic_energy(const MassProps& mass);
  static InvariantCandidate angular_speed();
  /// phi = a(theta).
  static InvariantCandidate theta_function(std::string name, std::function<double(double)> a);
  static InvariantCandidate custom(std::string name,
                                   std::function<double(const Vector2d&, double, double)> phi);
};

/// One sampled collision: the configuration and the velocities either side.
struct CollisionSample {
  Beta beta;
  Vector6d V;
  Vector6d V_post;
};

/// beta uniform on T^3; V standard normal in M-weighted coordinates,
/// rejection-sampled into the pre-collisional half-space; V_post from the
/// family's matrix. Deterministic in seed.
std::vector<CollisionSample> sample_collisions(const Body& body, const ScatteringFamily& family, int n_samples,
                                               std::uint64_t seed);

/// Phi(V; theta, thetabar) = phi(v, w, theta) + phi(vbar, wbar, thetabar).
double pair_sum(const InvariantCandidate& cand, const Vector6d& V, double theta, double thetabar);

double invariant_residual(const std::vector<CollisionSample>& samples, const InvariantCandidate& cand);

/// max |Phi(sV) - Phi(V)| over n_samples sampled collisions.
double invariant_residual(const Body& body, const ScatteringFamily& family, const InvariantCandidate& cand,
                          int n_samples, std::uint64_t seed);

double maxwellian_residual(const std::vector<CollisionSample>& samples, const MassProps& mass, const Vector2d& u,
                           double temperature);

/// With log M = -(m |v - u|^2 + J w^2) / Theta, the worst
/// |log M' + log Mbar' - log M - log Mbar| over sampled collisions.
double maxwellian_residual(const Body& body, const ScatteringFamily& family, const Vector2d& u, double temperature,
                           int n_samples, std::uint64_t seed);

}  // namespace hardpair
