#include "hardpair/dynamics.hpp"

#include <limits>
#include <sstream>

namespace hardpair {

Ledger ledger(const MassProps& mass, const State& z) {
  const Vector2d x = z.X.segment<2>(0), xbar = z.X.segment<2>(2);
  const Vector2d v = z.V.segment<2>(0), vbar = z.V.segment<2>(2);
  const double w = z.V(4), wbar = z.V(5);
  Ledger l;
  l.linear = mass.m * (v + vbar);
  l.angular = mass.m * cross(x, v) + mass.J * w + mass.m * cross(xbar, vbar) + mass.J * wbar;
  l.kinetic = 0.5 * (mass.m * v.squaredNorm() + mass.J * w * w + mass.m * vbar.squaredNorm() +
                     mass.J * wbar * wbar);
  return l;
}

double ledger_jump(const Ledger& a, const Ledger& b) {
  return std::max({(a.linear - b.linear).cwiseAbs().maxCoeff(), std::abs(a.angular - b.angular),
                   std::abs(a.kinetic - b.kinetic)});
}

State free_flight(const State& z, double dt) {
  State out = z;
  out.X += dt * z.V;
  out.t += dt;
  return out;
}

double centre_line_angle(const Vector6d& X) {
  return std::atan2(X(3) - X(1), X(2) - X(0));
}

Beta beta_of(const Vector6d& X) { return Beta(X(4), X(5), centre_line_angle(X)); }

double gap(const Body& body, const Vector6d& X, const ContactOptions& opts) {
  const Vector2d w = X.segment<2>(2) - X.segment<2>(0);
  const double dist = w.norm();
  if (!(dist > 1e-12 * body.diameter())) throw ValidationError("gap undefined: coincident centres");
  const Beta beta = beta_of(X);
  return dist - closest_approach(body, beta.theta_rel(), beta.psi_rel(), opts).d;
}

double gap_rate(const ContactData& c, const Vector6d& V) {
  return contact_normal_block(c).dot(V) / c.n.dot(unit_direction(c.psi));
}

namespace {

double speed_bound(const Body& body, const Vector6d& V) {
  return (V.segment<2>(2) - V.segment<2>(0)).norm() +
         (std::abs(V(4)) + std::abs(V(5))) * body.circumradius();
}

double resolve_t_tol(const SimOptions& opts, double horizon) {
  if (opts.t_tol > 0.0) return opts.t_tol;
  return 1e-12 * std::max(horizon, 1e-300);
}

// Golden-section minimum of g on [lo, hi].
std::pair<double, double> golden_minimum(const std::function<double(double)>& g, double lo, double hi,
                                         double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  while (hi - lo > tol) {
    if (f1 < 0.0) return {x1, f1};
    if (f2 < 0.0) return {x2, f2};
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    }
  }
  return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

std::optional<double> next_collision_time(const Body& body, const State& z, double t_max,
                                          const SimOptions& opts) {
  const double diam = body.diameter();
  const double g0 = gap(body, z.X, opts.contact);
  if (g0 < -1e-9 * diam) {
    std::ostringstream os;
    os << "state is not admissible: gap " << g0;
    throw ValidationError(os.str());
  }
  if (!(t_max > 0.0)) return std::nullopt;
  const double speed = speed_bound(body, z.V);
  if (!(speed > 0.0)) return std::nullopt;

  if (std::abs(g0) <= 1e-12 * std::max(1.0, diam)) {
    const ContactData c = d_beta(body, beta_of(z.X), opts.contact);
    if (gap_rate(c, z.V) < 0.0) return 0.0;
  }

  const double dt = opts.dt_scan > 0.0 ? opts.dt_scan : 0.05 * diam / speed;
  const double t_tol = resolve_t_tol(opts, t_max);
  auto g = [&](double t) { return gap(body, free_flight(z, t).X, opts.contact); };

  double lo = 0.0, hi = 0.0, g_hit = 0.0;
  bool found = false;
  double t_prev2 = -1.0, g_prev2 = 0.0;
  double t_prev = 0.0, g_prev = std::max(g0, 0.0);
  for (long step = 1; !found; ++step) {
    const double t = std::min(step * dt, t_max);
    const double gt = g(t);
    if (gt < 0.0) {
      lo = t_prev;
      hi = t;
      g_hit = gt;
      found = true;
      break;
    }
    // A sampled local minimum close to zero may hide a crossing between
    // samples.
    if (t_prev2 >= 0.0 && g_prev < g_prev2 && g_prev < gt && g_prev < speed * dt) {
      const auto [tm, gm] = golden_minimum(g, t_prev2, t, t_tol);
      if (gm < 0.0) {
        lo = t_prev2;
        hi = tm;
        g_hit = gm;
        found = true;
        break;
      }
    }
    if (t >= t_max) return std::nullopt;
    t_prev2 = t_prev;
    g_prev2 = g_prev;
    t_prev = t;
    g_prev = gt;
  }

  // Deep first hit: halve the step inside the bracket while the new sample is
  // still deep, so an earlier shallow crossing is not skipped.
  for (int halving = 0; halving < 10 && g_hit < -1e-6 * diam; ++halving) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm >= 0.0) break;
    hi = mid;
    g_hit = gm;
  }

  while (hi - lo > t_tol) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (mid == lo && mid == hi) break;
  }
  return lo;
}

ResolvedCollision resolve_collision(const Body& body, const State& z, const ScatteringFamily& family,
                                    const SimOptions& opts) {
  const double diam = body.diameter();
  ResolvedCollision out;
  out.state = z;
  CollisionEvent& ev = out.event;
  ev.t = z.t;
  ev.before = ledger(body.mass_props(), z);

  const Beta beta = beta_of(z.X);
  const ContactData contact = d_beta(body, beta, opts.contact);
  const Vector2d w = z.X.segment<2>(2) - z.X.segment<2>(0);
  const double g = w.norm() - contact.d;
  if (std::abs(g) > 1e-8 * diam) {
    std::ostringstream os;
    os << "resolve_collision called away from contact: gap " << g;
    throw ValidationError(os.str());
  }
  if (std::abs(g) < 1e-12 * std::max(1.0, diam)) {
    const Vector2d e = w / w.norm();
    out.state.X.segment<2>(0) += 0.5 * g * e;
    out.state.X.segment<2>(2) -= 0.5 * g * e;
    ev.projection = g;
  }

  const Frame frame = build_frame(contact, beta, body.mass_props());
  const ScatterMatrix sm = scattering_matrix(family, frame);
  const ScatterResult res = apply_scattering(sm, z.V, opts.grazing_tol);

  out.state.V = res.V;
  ev.beta = beta;
  ev.contact = contact;
  ev.V_pre = z.V;
  ev.V_post = res.V;
  ev.grazing = res.grazing;
  ev.approach_rate = gap_rate(contact, z.V);
  ev.separation_rate = gap_rate(contact, res.V);
  ev.det = sm.s.determinant();
  ev.after = ledger(body.mass_props(), out.state);
  return out;
}

namespace {

Sample make_sample(const Body& body, const State& z, bool event, const ContactOptions& opts) {
  Sample s;
  s.t = z.t;
  s.X = z.X;
  s.V = z.V;
  s.event = event;
  s.ledger = ledger(body.mass_props(), z);
  s.gap = gap(body, z.X, opts);
  return s;
}

}  // namespace

Trajectory simulate(const Body& body, const State& z0, const ScatteringFamily& family, double T,
                    const SimOptions& opts_in) {
  if (!(T > 0.0)) throw ValidationError("horizon T must be positive");
  SimOptions opts = opts_in;
  opts.t_tol = resolve_t_tol(opts_in, T);

  const double diam = body.diameter();
  const double g0 = gap(body, z0.X, opts.contact);
  if (g0 < -1e-9 * diam) {
    std::ostringstream os;
    os << "initial state is not admissible: gap " << g0;
    throw ValidationError(os.str());
  }

  Trajectory traj;
  traj.initial = z0;
  traj.min_gap = g0;
  traj.min_separation_rate = std::numeric_limits<double>::infinity();
  const double scale = 1.0 + z0.V.squaredNorm();
  const double t_end = z0.t + T;

  State z = z0;
  long sample_index = 0;
  auto emit_samples_until = [&](double t_stop, bool inclusive) {
    if (!(opts.sample_dt > 0.0)) return;
    for (;;) {
      const double ts = z0.t + sample_index * opts.sample_dt;
      if (inclusive ? ts > t_stop : ts >= t_stop) break;
      const Sample s = make_sample(body, free_flight(z, ts - z.t), false, opts.contact);
      traj.min_gap = std::min(traj.min_gap, s.gap);
      traj.samples.push_back(s);
      ++sample_index;
    }
  };

  while (z.t < t_end) {
    const double remaining = t_end - z.t;
    const std::optional<double> tc = next_collision_time(body, z, remaining, opts);
    if (!tc) {
      emit_samples_until(t_end, true);
      z = free_flight(z, remaining);
      z.t = t_end;
      break;
    }
    emit_samples_until(z.t + *tc, false);
    z = free_flight(z, *tc);
    ResolvedCollision rc = resolve_collision(body, z, family, opts);
    z = rc.state;
    traj.max_ledger_jump = std::max(traj.max_ledger_jump, ledger_jump(rc.event.before, rc.event.after) / scale);
    traj.min_separation_rate = std::min(traj.min_separation_rate, rc.event.separation_rate);
    if (rc.event.grazing) ++traj.grazing_events;
    traj.events.push_back(std::move(rc.event));
    Sample s = make_sample(body, z, true, opts.contact);
    traj.min_gap = std::min(traj.min_gap, s.gap);
    if (opts.sample_dt > 0.0) traj.samples.push_back(s);
    if (static_cast<long>(traj.events.size()) > opts.max_events) {
      std::ostringstream os;
      os << "more than " << opts.max_events << " collisions before t=" << z.t
         << "; suspected accumulation of collision times";
      throw ConvergenceError(os.str());
    }
  }

  traj.final = z;
  traj.min_gap = std::min(traj.min_gap, gap(body, z.X, opts.contact));
  traj.total_ledger_drift = ledger_jump(ledger(body.mass_props(), z0), ledger(body.mass_props(), z)) / scale;
  if (traj.events.empty()) traj.min_separation_rate = 0.0;
  return traj;
}

double time_reverse_check(const Body& body, const State& z0, const ScatteringFamily& family, double T,
                          const SimOptions& opts_in) {
  SimOptions opts = opts_in;
  opts.sample_dt = 0.0;
  const Trajectory forward = simulate(body, z0, family, T, opts);
  State back = forward.final;
  back.V = -back.V;
  back.t = 0.0;
  const Trajectory backward = simulate(body, back, family, T, opts);
  State end = backward.final;
  end.V = -end.V;

  double err = (end.X.head<4>() - z0.X.head<4>()).cwiseAbs().maxCoeff();
  err = std::max(err, angle_distance(end.X(4), z0.X(4)));
  err = std::max(err, angle_distance(end.X(5), z0.X(5)));
  return err;
}

DivergenceReport divergence_report(const Body& body, const State& z0,
                                   const std::vector<ScatteringFamily>& families, double T,
                                   const SimOptions& opts, double conservation_tol, double distinct_tol) {
  DivergenceReport rep;
  rep.speed_scale = z0.V.norm();
  for (const ScatteringFamily& fam : families) {
    FamilyRun run;
    run.name = fam.name();
    run.trajectory = simulate(body, z0, fam, T, opts);
    if (run.trajectory.events.empty()) {
      rep.degenerate = true;
      run.first_post_velocity = z0.V;
    } else {
      run.first_post_velocity = run.trajectory.events.front().V_post;
    }
    run.conservation_residual = std::max(run.trajectory.max_ledger_jump, run.trajectory.total_ledger_drift);
    rep.max_conservation_residual = std::max(rep.max_conservation_residual, run.conservation_residual);
    rep.runs.push_back(std::move(run));
  }

  const Eigen::Index n = static_cast<Eigen::Index>(rep.runs.size());
  rep.velocity_divergence = Eigen::MatrixXd::Zero(n, n);
  rep.state_divergence = Eigen::MatrixXd::Zero(n, n);
  rep.min_pairwise_velocity_divergence = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& a = rep.runs[i];
      const auto& b = rep.runs[j];
      rep.velocity_divergence(i, j) = (a.first_post_velocity - b.first_post_velocity).cwiseAbs().maxCoeff();
      rep.state_divergence(i, j) =
          std::max((a.trajectory.final.X - b.trajectory.final.X).cwiseAbs().maxCoeff(),
                   (a.trajectory.final.V - b.trajectory.final.V).cwiseAbs().maxCoeff());
      if (i < j) {
        rep.min_pairwise_velocity_divergence =
            std::min(rep.min_pairwise_velocity_divergence, rep.velocity_divergence(i, j));
      }
    }
  }
  if (n < 2) rep.min_pairwise_velocity_divergence = 0.0;
  rep.all_conserve = rep.max_conservation_residual < conservation_tol;
  rep.all_distinct = n >= 2 && !rep.degenerate &&
                     rep.min_pairwise_velocity_divergence > distinct_tol * rep.speed_scale;
  return rep;
}

}  // namespace hardpair
