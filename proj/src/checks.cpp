#include "hardpair/checks.hpp"

#include <chrono>
#include <random>

#include "hardpair/kinetic.hpp"

namespace hardpair {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Beta random_beta(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const double a = angle(rng), b = angle(rng), c = angle(rng);
  return Beta(a, b, c);
}

Vector6d random_normal6(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector6d v;
  for (int i = 0; i < 6; ++i) v(i) = normal(rng);
  return v;
}

ScatteringFamily fourier_family() {
  return ScatteringFamily::orientation_preserving(
      LineField::fourier(0.3, {{1, 0, 0.4, 0.0}, {0, 1, 0.0, 0.25}, {1, -1, 0.1, 0.2}}));
}

std::vector<ScatteringFamily> suite_families() {
  return {ScatteringFamily::reflection(), ScatteringFamily::epsi(),
          ScatteringFamily::orientation_preserving(LineField::constant(kPi / 4.0)), fourier_family()};
}

// Centres diam * (1.05..2.05) apart, closing along the centre line with a
// transverse offset and random spins.
State random_colliding_datum(const Body& body, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double psi = kTwoPi * unit(rng);
  const double R = body.diameter() * (1.05 + unit(rng));
  const Vector2d e = unit_direction(psi);
  const Vector2d rel = (0.5 + unit(rng)) * e + 0.3 * (2.0 * unit(rng) - 1.0) * perp(e);
  const Vector2d common(0.3 * normal(rng), 0.3 * normal(rng));
  State z;
  z.X << 0.0, 0.0, R * e(0), R * e(1), kTwoPi * unit(rng), kTwoPi * unit(rng);
  z.V << common + 0.5 * rel, common - 0.5 * rel, normal(rng), normal(rng);
  return z;
}

}  // namespace

CheckResult check_frames(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult r{1, "frame orthonormality and E_beta routes", false, 0.0, {}, ""};
  std::mt19937_64 rng(seed);
  const Body disk = make_disk(1.0), ellipse = make_ellipse(2.0, 1.0);
  double ortho = 0.0, routes = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Body& body = (i % 2 == 0) ? disk : ellipse;
    const Frame f = build_frame(body, random_beta(rng));
    ortho = std::max(ortho, orthonormality_residual(f));
    const MassProps mp = body.mass_props();
    const Vector6d a = e_beta(f.psi, f.d, mp.m, mp.J);
    const Vector6d b = e_beta_gram_schmidt(f.psi, f.d, mp.m, mp.J);
    routes = std::max(routes, (a - b).cwiseAbs().maxCoeff());
  }
  r.seconds = elapsed(t0);
  r.metrics = {{"orthonormality", ortho}, {"ebeta_routes", routes}, {"seconds", r.seconds}};
  r.pass = ortho < 1e-10 && routes < 1e-10 && r.seconds < 10.0;
  return r;
}

CheckResult check_oracle(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult r{2, "closest approach vs bisection oracle", false, 0.0, {}, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const Body ellipse = make_ellipse(2.0, 1.0), disk = make_disk(1.0);
  double worst = 0.0, disk_worst = 0.0;
  int fallbacks = 0;
  for (int i = 0; i < 200; ++i) {
    const double th = angle(rng), ps = angle(rng);
    const ContactData c = closest_approach(ellipse, th, ps);
    if (c.used_fallback) ++fallbacks;
    worst = std::max(worst, std::abs(c.d - closest_approach_oracle(ellipse, th, ps)));
    disk_worst = std::max(disk_worst, std::abs(closest_approach(disk, th, ps).d - 2.0));
    if (i < 20) disk_worst = std::max(disk_worst, std::abs(closest_approach_oracle(disk, th, ps) - 2.0));
  }
  r.seconds = elapsed(t0);
  r.metrics = {{"ellipse_vs_oracle", worst},
               {"disk_vs_2r", disk_worst},
               {"fallbacks", static_cast<double>(fallbacks)},
               {"seconds", r.seconds}};
  r.pass = worst < 1e-6 && disk_worst < 1e-10 && r.seconds < 60.0;
  return r;
}

CheckResult check_identities(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult r{3, "contact-data identities", false, 0.0, {}, ""};
  std::mt19937_64 rng(seed);
  const Body ellipse = make_ellipse(2.0, 1.0), disk = make_disk(1.0);
  double normal = 0.0, arm = 0.0, gamma = 0.0, dtheta_normal = 0.0, dtheta_gamma = 0.0;
  double disk_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Beta beta = random_beta(rng);
    const IdentityResiduals e = identity_residuals(ellipse, beta, 1e-5);
    normal = std::max(normal, e.normal_direction);
    arm = std::max(arm, e.moment_arm);
    gamma = std::max(gamma, e.gamma_collinearity);
    dtheta_normal = std::max(dtheta_normal, e.normal_direction_dtheta);
    dtheta_gamma = std::max(dtheta_gamma, e.gamma_collinearity_dtheta);
    const IdentityResiduals d = identity_residuals(disk, beta, 1e-5);
    disk_worst = std::max({disk_worst, d.normal_direction, d.moment_arm, d.gamma_collinearity});
  }
  r.seconds = elapsed(t0);
  r.metrics = {{"normal_direction", normal},
               {"moment_arm", arm},
               {"gamma_collinearity", gamma},
               {"disk_worst", disk_worst},
               {"dtheta_normal_direction", dtheta_normal},
               {"dtheta_gamma_collinearity", dtheta_gamma},
               {"seconds", r.seconds}};
  r.pass = normal < 1e-5 && arm < 1e-5 && gamma < 1e-5 && disk_worst < 1e-10;
  r.note = "dtheta_* use dD/dtheta in place of dD/dpsi; diagnostic only";
  return r;
}

CheckResult check_scattering(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult r{4, "scattering families", false, 0.0, {}, ""};
  std::mt19937_64 rng(seed);
  const Body ellipse = make_ellipse(2.0, 1.0);
  const MassProps mp = ellipse.mass_props();
  const std::vector<ScatteringFamily> families = suite_families();
  const int n = 10000;

  std::vector<ScatterReport> worst(families.size());
  std::vector<double> det_dev(families.size(), 0.0);
  std::vector<bool> det_sign(families.size(), true);
  double impulse = 0.0, explicit_epsi = 0.0;
  for (int i = 0; i < n; ++i) {
    const Beta beta = random_beta(rng);
    const ContactData c = d_beta(ellipse, beta);
    const Frame frame = build_frame(c, beta, mp);
    const std::uint64_t sub = rng();
    for (std::size_t k = 0; k < families.size(); ++k) {
      const ScatterMatrix sm = scattering_matrix(families[k], frame);
      const ScatterReport rep = verify_scattering(sm, 1, sub);
      ScatterReport& w = worst[k];
      w.involution = std::max(w.involution, rep.involution);
      w.symmetry = std::max(w.symmetry, rep.symmetry);
      w.orthogonality = std::max(w.orthogonality, rep.orthogonality);
      w.linear_momentum = std::max(w.linear_momentum, rep.linear_momentum);
      w.angular_momentum = std::max(w.angular_momentum, rep.angular_momentum);
      w.kinetic_energy = std::max(w.kinetic_energy, rep.kinetic_energy);
      w.eigen_structure = std::max(w.eigen_structure, rep.eigen_structure);
      w.flip = std::max(w.flip, rep.flip);
      w.flip_sign_ok = w.flip_sign_ok && rep.flip_sign_ok;
      w.grazing += rep.grazing;
      det_dev[k] = std::max(det_dev[k], std::abs(std::abs(rep.determinant) - 1.0));
      det_sign[k] = det_sign[k] && ((rep.determinant > 0.0) == (families[k].orientation() > 0));

      if (k <= 1) {
        Vector6d V = random_normal6(rng);
        if (normal_velocity(frame, V) > 0.0) V = -V;
        const double scale = 1.0 + V.norm();
        if (k == 0) {
          impulse = std::max(impulse, (impulse_scatter(c, mp, V) - sm.s * V).cwiseAbs().maxCoeff() / scale);
        } else {
          explicit_epsi = std::max(
              explicit_epsi, (explicit_epsi_velocities(c.psi, c.d, mp, V) - sm.s * V).cwiseAbs().maxCoeff() / scale);
        }
      }
    }
  }
  r.seconds = elapsed(t0);
  bool ok = impulse < 1e-10 && explicit_epsi < 1e-10;
  for (std::size_t k = 0; k < families.size(); ++k) {
    const ScatterReport& w = worst[k];
    const std::string p = families[k].name() + ".";
    r.metrics.push_back({p + "involution", w.involution});
    r.metrics.push_back({p + "linear_momentum", w.linear_momentum});
    r.metrics.push_back({p + "angular_momentum", w.angular_momentum});
    r.metrics.push_back({p + "kinetic_energy", w.kinetic_energy});
    r.metrics.push_back({p + "det_deviation", det_dev[k]});
    r.metrics.push_back({p + "det_sign_ok", det_sign[k] ? 1.0 : 0.0});
    r.metrics.push_back({p + "flip", w.flip});
    r.metrics.push_back({p + "flip_sign_ok", w.flip_sign_ok ? 1.0 : 0.0});
    r.metrics.push_back({p + "eigen_structure", w.eigen_structure});
    ok = ok && w.involution < 1e-10 && w.symmetry < 1e-10 && w.orthogonality < 1e-10 &&
         w.linear_momentum < 1e-10 && w.angular_momentum < 1e-10 && w.kinetic_energy < 1e-10 &&
         det_dev[k] < 1e-10 && det_sign[k] && w.flip < 1e-10 && w.flip_sign_ok && w.eigen_structure < 1e-10;
  }
  r.metrics.push_back({"impulse_vs_matrix", impulse});
  r.metrics.push_back({"explicit_epsi_vs_matrix", explicit_epsi});
  r.metrics.push_back({"seconds", r.seconds});
  r.pass = ok;
  return r;
}

CheckResult check_disk_reduction(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult r{5, "disk reflection is specular exchange", false, 0.0, {}, ""};
  std::mt19937_64 rng(seed);
  double worst = 0.0, spin = 0.0;
  for (double radius : {1.0, 0.5, 3.0}) {
    const Body disk = make_disk(radius);
    for (int i = 0; i < 1000; ++i) {
      const Beta beta = random_beta(rng);
      const Frame frame = build_frame(disk, beta);
      const ScatterMatrix sm = scattering_matrix(ScatteringFamily::reflection(), frame);
      Vector6d V = random_normal6(rng);
      if (normal_velocity(frame, V) > 0.0) V = -V;
      const Vector6d Vp = sm.s * V;
      const Vector2d e = unit_direction(beta.psi);
      const double exchange = (V.segment<2>(0) - V.segment<2>(2)).dot(e);
      Vector6d expected = V;
      expected.segment<2>(0) -= exchange * e;
      expected.segment<2>(2) += exchange * e;
      worst = std::max(worst, (Vp - expected).segment<4>(0).cwiseAbs().maxCoeff());
      spin = std::max(spin, (Vp - V).segment<2>(4).cwiseAbs().maxCoeff());
    }
  }
  r.seconds = elapsed(t0);
  r.metrics = {{"specular_exchange", worst}, {"spin_change", spin}, {"seconds", r.seconds}};
  r.pass = worst < 1e-12 && spin < 1e-12;
  return r;
}

CheckResult check_dynamics(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult r{6, "event-driven dynamics", false, 0.0, {}, ""};

  const Body disk = make_disk(1.0);
  State head_on;
  head_on.X << 0.0, 0.0, 4.0, 0.0, 0.0, 0.0;
  head_on.V << 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  const std::optional<double> tc = next_collision_time(disk, head_on, 10.0);
  const double head_on_error = tc ? std::abs(*tc - 2.0) : std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  const Body ellipse = make_ellipse(2.0, 1.0);
  const double diam = ellipse.diameter();
  const std::vector<ScatteringFamily> families = suite_families();
  double jump = 0.0, drift = 0.0, min_gap = std::numeric_limits<double>::infinity();
  double sep = std::numeric_limits<double>::infinity(), reversal = 0.0;
  int accepted = 0, attempts = 0, events = 0, reversal_runs = 0, max_events = 0;
  while (accepted < 50 && attempts < 500) {
    ++attempts;
    const State z = random_colliding_datum(ellipse, rng);
    const ScatteringFamily& fam = families[static_cast<std::size_t>(accepted) % families.size()];
    const double T = 3.0 * (z.X.segment<2>(2) - z.X.segment<2>(0)).norm() /
                     std::max(1e-3, (z.V.segment<2>(0) - z.V.segment<2>(2)).norm());
    SimOptions opts;
    opts.sample_dt = T / 200.0;
    const Trajectory tr = simulate(ellipse, z, fam, T, opts);
    if (tr.events.empty()) continue;
    ++accepted;
    events += static_cast<int>(tr.events.size());
    max_events = std::max(max_events, static_cast<int>(tr.events.size()));
    jump = std::max(jump, tr.max_ledger_jump);
    drift = std::max(drift, tr.total_ledger_drift);
    min_gap = std::min(min_gap, tr.min_gap);
    sep = std::min(sep, tr.min_separation_rate);
    if (tr.events.size() <= 5) {
      reversal = std::max(reversal, time_reverse_check(ellipse, z, fam, T));
      ++reversal_runs;
    }
  }
  // Rocking datum: counter-rotating ellipses under the epsi family collide
  // repeatedly (3 and 4 events on these horizons).
  int multi_events = 0;
  for (double T : {4.0, 6.0}) {
    const State z = rocking_datum();
    const Trajectory tr = simulate(ellipse, z, ScatteringFamily::epsi(), T);
    multi_events = std::max(multi_events, static_cast<int>(tr.events.size()));
    jump = std::max(jump, tr.max_ledger_jump);
    min_gap = std::min(min_gap, tr.min_gap);
    if (tr.events.size() <= 5) {
      reversal = std::max(reversal, time_reverse_check(ellipse, z, ScatteringFamily::epsi(), T));
      ++reversal_runs;
    }
  }

  r.seconds = elapsed(t0);
  r.metrics = {{"head_on_time_error", head_on_error},
               {"rocking_events", static_cast<double>(multi_events)},
               {"data", static_cast<double>(accepted)},
               {"events", static_cast<double>(events)},
               {"max_events_per_run", static_cast<double>(max_events)},
               {"ledger_jump", jump},
               {"ledger_drift", drift},
               {"min_gap_over_diameter", min_gap / diam},
               {"min_separation_rate", sep},
               {"reversal_runs", static_cast<double>(reversal_runs)},
               {"time_reversal", reversal},
               {"seconds", r.seconds}};
  r.pass = head_on_error < 1e-9 && accepted == 50 && multi_events >= 3 && jump < 1e-9 && min_gap >= -1e-9 * diam && sep >= -1e-9 &&
           reversal < 1e-6;
  return r;
}

State rocking_datum() {
  State z;
  z.X << 0.0, 0.0, 2.6, 0.3, kPi / 2.0, kPi / 2.0 + 0.2;
  z.V << 0.05, 0.0, 0.0, 0.02, -1.0, 0.5;
  return z;
}

State nonuniqueness_datum() {
  State z;
  z.X << 0.0, 0.0, 5.0, 0.7, 0.3, 1.1;
  z.V << 1.0, 0.1, -1.0, 0.0, 0.5, -0.3;
  return z;
}

std::vector<ScatteringFamily> nonuniqueness_families() {
  return {ScatteringFamily::reflection(),
          ScatteringFamily::epsi(),
          ScatteringFamily::orientation_preserving(LineField::constant(0.0)),
          ScatteringFamily::orientation_preserving(LineField::constant(kPi / 6.0)),
          ScatteringFamily::orientation_preserving(LineField::constant(kPi / 4.0)),
          ScatteringFamily::orientation_preserving(LineField::constant(kPi / 3.0))};
}

CheckResult check_nonuniqueness() {
  const auto t0 = Clock::now();
  CheckResult r{7, "non-uniqueness across families", false, 0.0, {}, ""};
  const DivergenceReport rep =
      divergence_report(make_ellipse(2.0, 1.0), nonuniqueness_datum(), nonuniqueness_families(), 8.0);
  r.seconds = elapsed(t0);
  r.metrics = {{"families", static_cast<double>(rep.runs.size())},
               {"max_conservation_residual", rep.max_conservation_residual},
               {"min_pairwise_velocity_divergence", rep.min_pairwise_velocity_divergence},
               {"threshold", 1e-6 * rep.speed_scale},
               {"seconds", r.seconds}};
  r.pass = !rep.degenerate && rep.runs.size() == 6 && rep.max_conservation_residual < 1e-9 &&
           rep.min_pairwise_velocity_divergence > 1e-6 * rep.speed_scale && r.seconds < 30.0;
  return r;
}

CheckResult check_kinetic(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult r{8, "collision-invariant probe", false, 0.0, {}, ""};
  const Body ellipse = make_ellipse(2.0, 1.0), disk = make_disk(1.0);
  const int n = 10000;
  const std::vector<InvariantCandidate> invariants = {
      InvariantCandidate::constant(), InvariantCandidate::momentum_x(), InvariantCandidate::momentum_y(),
      InvariantCandidate::kinetic_energy(ellipse.mass_props()),
      InvariantCandidate::theta_function("sin(theta)", [](double t) { return std::sin(t); })};
  const InvariantCandidate omega = InvariantCandidate::angular_speed();

  double worst_invariant = 0.0, maxwellian = 0.0;
  bool ok = true;
  for (const ScatteringFamily& fam : suite_families()) {
    const std::vector<CollisionSample> samples = sample_collisions(ellipse, fam, n, seed);
    for (const InvariantCandidate& cand : invariants) {
      const double res = invariant_residual(samples, cand);
      worst_invariant = std::max(worst_invariant, res);
      r.metrics.push_back({fam.name() + "." + cand.name, res});
    }
    maxwellian = std::max(maxwellian, maxwellian_residual(samples, ellipse.mass_props(), Vector2d(3.0, -1.0), 0.5));
    const double w = invariant_residual(samples, omega);
    r.metrics.push_back({fam.name() + ".w(ellipse)", w});
    if (fam.kind == FamilyKind::Reflection) ok = ok && w > 1e-3;
  }
  const double disk_omega =
      invariant_residual(disk, ScatteringFamily::reflection(), omega, n, seed);
  r.seconds = elapsed(t0);
  r.metrics.push_back({"reflection.w(disk)", disk_omega});
  r.metrics.push_back({"worst_invariant", worst_invariant});
  r.metrics.push_back({"maxwellian", maxwellian});
  r.metrics.push_back({"seconds", r.seconds});
  r.pass = ok && worst_invariant < 1e-9 && disk_omega < 1e-10 && maxwellian < 1e-9;
  return r;
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
  return {check_frames(seed),         check_oracle(seed + 1),   check_identities(seed + 2),
          check_scattering(seed + 3), check_disk_reduction(seed + 4), check_dynamics(seed + 5),
          check_nonuniqueness(),      check_kinetic(seed + 7)};
}

}  // namespace hardpair
