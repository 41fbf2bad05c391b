#include "hardpair/kinetic.hpp"

#include <random>

namespace hardpair {

InvariantCandidate InvariantCandidate::constant() {
  return {"1", InvariantKind::Constant, [](const Vector2d&, double, double) { return 1.0; }};
}

InvariantCandidate InvariantCandidate::momentum_x() {
  return {"v1", InvariantKind::MomentumX, [](const Vector2d& v, double, double) { return v(0); }};
}

InvariantCandidate InvariantCandidate::momentum_y() {
  return {"v2", InvariantKind::MomentumY, [](const Vector2d& v, double, double) { return v(1); }};
}

InvariantCandidate InvariantCandidate::kinetic_energy(const MassProps& mass) {
  return {"m|v|^2+Jw^2", InvariantKind::KineticEnergy,
          [mass](const Vector2d& v, double w, double) { return mass.m * v.squaredNorm() + mass.J * w * w; }};
}

InvariantCandidate InvariantCandidate::angular_speed() {
  return {"w", InvariantKind::AngularSpeed, [](const Vector2d&, double w, double) { return w; }};
}

InvariantCandidate InvariantCandidate::theta_function(std::string name, std::function<double(double)> a) {
  return {std::move(name), InvariantKind::ThetaFunction,
          [a = std::move(a)](const Vector2d&, double, double theta) { return a(theta); }};
}

InvariantCandidate InvariantCandidate::custom(std::string name,
                                              std::function<double(const Vector2d&, double, double)> phi) {
  return {std::move(name), InvariantKind::Custom, std::move(phi)};
}

std::vector<CollisionSample> sample_collisions(const Body& body, const ScatteringFamily& family, int n_samples,
                                               std::uint64_t seed) {
  if (n_samples < 1) throw ValidationError("n_samples must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::normal_distribution<double> normal(0.0, 1.0);
  const MassInertiaMatrix M = mass_inertia_matrix(body);

  std::vector<CollisionSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double a = angle(rng), b = angle(rng), c = angle(rng);
    const Beta beta(a, b, c);
    const Frame frame = build_frame(body, beta);
    const ScatterMatrix sm = scattering_matrix(family, frame);
    Vector6d W;
    do {
      for (int k = 0; k < 6; ++k) W(k) = normal(rng);
    } while (!(W.dot(frame.nu) < 0.0));
    const Vector6d V = M.inverse() * W;
    out.push_back({beta, V, sm.s * V});
  }
  return out;
}

double pair_sum(const InvariantCandidate& cand, const Vector6d& V, double theta, double thetabar) {
  return cand.phi(V.segment<2>(0), V(4), theta) + cand.phi(V.segment<2>(2), V(5), thetabar);
}

double invariant_residual(const std::vector<CollisionSample>& samples, const InvariantCandidate& cand) {
  double worst = 0.0;
  for (const CollisionSample& s : samples) {
    const double before = pair_sum(cand, s.V, s.beta.theta, s.beta.thetabar);
    const double after = pair_sum(cand, s.V_post, s.beta.theta, s.beta.thetabar);
    worst = std::max(worst, std::abs(after - before));
  }
  return worst;
}

double invariant_residual(const Body& body, const ScatteringFamily& family, const InvariantCandidate& cand,
                          int n_samples, std::uint64_t seed) {
  return invariant_residual(sample_collisions(body, family, n_samples, seed), cand);
}

double maxwellian_residual(const std::vector<CollisionSample>& samples, const MassProps& mass, const Vector2d& u,
                           double temperature) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  auto log_density = [&](const Vector2d& v, double w) {
    return -(mass.m * (v - u).squaredNorm() + mass.J * w * w) / temperature;
  };
  auto pair = [&](const Vector6d& V) {
    return log_density(V.segment<2>(0), V(4)) + log_density(V.segment<2>(2), V(5));
  };
  double worst = 0.0;
  for (const CollisionSample& s : samples) worst = std::max(worst, std::abs(pair(s.V_post) - pair(s.V)));
  return worst;
}

double maxwellian_residual(const Body& body, const ScatteringFamily& family, const Vector2d& u, double temperature,
                           int n_samples, std::uint64_t seed) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  return maxwellian_residual(sample_collisions(body, family, n_samples, seed), body.mass_props(), u, temperature);
}

}  // namespace hardpair
