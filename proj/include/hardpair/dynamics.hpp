#pragma once

#include <optional>
#include <vector>

#include "hardpair/scattering.hpp"

namespace hardpair {

/// Phase point: X = (x, xbar, theta, thetabar), V = (v, vbar, w, wbar).
struct State {
  Vector6d X = Vector6d::Zero();
  Vector6d V = Vector6d::Zero();
  double t = 0.0;
};

/// Linear momentum, angular momentum about the origin and kinetic energy.
struct Ledger {
  Vector2d linear = Vector2d::Zero();
  double angular = 0.0;
  double kinetic = 0.0;
};

Ledger ledger(const MassProps& mass, const State& z);

/// Componentwise worst difference between two ledgers.
double ledger_jump(const Ledger& a, const Ledger& b);

struct SimOptions {
  double t_tol = 0.0;       ///< root time tolerance; 0 selects 1e-12 * horizon
  double dt_scan = 0.0;     ///< scan step; 0 selects 0.05 * diameter / speed bound
  double grazing_tol = 1e-9;
  double sample_dt = 0.0;   ///< trajectory sampling interval; 0 disables sampling
  long max_events = 1000000;
  ContactOptions contact;
};

struct CollisionEvent {
  double t = 0.0;
  Beta beta;
  ContactData contact;
  Vector6d V_pre;
  Vector6d V_post;
  Ledger before;
  Ledger after;
  bool grazing = false;
  double projection = 0.0;      ///< centre-line shift applied to close the gap
  double approach_rate = 0.0;   ///< d gap/dt just before the event
  double separation_rate = 0.0; ///< d gap/dt just after the event
  double det = 0.0;             ///< determinant of the applied scatter matrix
};

struct Sample {
  double t = 0.0;
  Vector6d X;
  Vector6d V;
  bool event = false;
  Ledger ledger;
  double gap = 0.0;
};

struct Trajectory {
  State initial;
  State final;
  std::vector<CollisionEvent> events;
  std::vector<Sample> samples;
  double min_gap = 0.0;             ///< over samples, event states and the final state
  double max_ledger_jump = 0.0;     ///< worst per-event ledger change
  double total_ledger_drift = 0.0;  ///< final vs initial ledger
  double min_separation_rate = 0.0;
  int grazing_events = 0;
};

/// x += v dt, xbar += vbar dt, theta += w dt, thetabar += wbar dt.
State free_flight(const State& z, double dt);

/// psi(X) = atan2 of the centre line.
double centre_line_angle(const Vector6d& X);

Beta beta_of(const Vector6d& X);

/// |x - xbar| - d_beta(X).
double gap(const Body& body, const Vector6d& X, const ContactOptions& opts = {});

/// Time derivative of the gap along free flight at a contact configuration,
/// (u . V) / (n . e(psi)) with u = (-n, n, -p_perp.n, q_perp.n).
double gap_rate(const ContactData& lab_contact, const Vector6d& V);

/// First time in [0, t_max] at which the gap closes, or nullopt. Brackets the
/// first sign change on a scan grid (with a golden-section check at sampled
/// local minima to catch near-tangent dips) and bisects to opts.t_tol.
std::optional<double> next_collision_time(const Body& body, const State& z, double t_max,
                                          const SimOptions& opts = {});

struct ResolvedCollision {
  State state;
  CollisionEvent event;
};

/// Applies the family's scattering matrix at a contact configuration.
ResolvedCollision resolve_collision(const Body& body, const State& z, const ScatteringFamily& family,
                                    const SimOptions& opts = {});

Trajectory simulate(const Body& body, const State& z0, const ScatteringFamily& family, double T,
                    const SimOptions& opts = {});

/// Forward to T, reverse velocities, forward T again, reverse velocities;
/// worst position / angle (mod 2pi) error against z0.
double time_reverse_check(const Body& body, const State& z0, const ScatteringFamily& family, double T,
                          const SimOptions& opts = {});

struct FamilyRun {
  std::string name;
  Trajectory trajectory;
  Vector6d first_post_velocity;
  double conservation_residual = 0.0;  ///< scaled by 1 + |V0|^2
};

struct DivergenceReport {
  std::vector<FamilyRun> runs;
  Eigen::MatrixXd velocity_divergence;  ///< sup-norm of first post-event velocity differences
  Eigen::MatrixXd state_divergence;     ///< sup-norm of final (X, V) differences
  double min_pairwise_velocity_divergence = 0.0;
  double max_conservation_residual = 0.0;
  double speed_scale = 0.0;  ///< |V0|
  bool degenerate = false;   ///< some family saw no collision
  bool all_conserve = false;
  bool all_distinct = false;
};

DivergenceReport divergence_report(const Body& body, const State& z0,
                                   const std::vector<ScatteringFamily>& families, double T,
                                   const SimOptions& opts = {}, double conservation_tol = 1e-9,
                                   double distinct_tol = 1e-6);

}  // namespace hardpair
