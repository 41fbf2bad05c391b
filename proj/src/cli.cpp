#include "hardpair/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hardpair/checks.hpp"
#include "hardpair/config.hpp"
#include "hardpair/kinetic.hpp"

namespace hardpair {

using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

RunConfig load_with_overrides(const Common& c) {
  if (c.config.empty()) throw ValidationError("--config: required");
  RunConfig cfg = load_config(c.config);
  if (c.seed) {
    json raw = cfg.raw;
    raw["seed"] = *c.seed;
    cfg = parse_config(raw);
  }
  return cfg;
}

Vector6d parse_velocity(const std::string& text) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--V: cannot parse \"" + item + "\" as a number");
    }
  }
  if (xs.size() != 6) throw ValidationError("--V: expected 6 comma-separated numbers");
  return Eigen::Map<const Vector6d>(xs.data());
}

json vec2(const Vector2d& v) { return {v(0), v(1)}; }

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError(path + ": cannot open for writing");
  f.precision(17);
  return f;
}

int cmd_geometry(const std::string& body_file, double theta, double thetabar, double psi, std::ostream& out) {
  std::ifstream in(body_file);
  if (!in) throw ValidationError(body_file + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(body_file + ": " + e.what());
  }
  const json& body_json = j.contains("body") ? j["body"] : j;
  const Body body = parse_body(body_json);
  const Beta beta(theta, thetabar, psi);
  ContactData c = d_beta(body, beta);
  c.derivatives = d_derivatives(body, beta.theta_rel(), beta.psi_rel());
  const IdentityResiduals ir = identity_residuals(body, beta);
  json rec = {{"body", body.describe()},
              {"beta", {{"theta", beta.theta}, {"thetabar", beta.thetabar}, {"psi", beta.psi}}},
              {"d", c.d},
              {"p", vec2(c.p)},
              {"q", vec2(c.q)},
              {"n", vec2(c.n)},
              {"dD_dtheta", c.derivatives->dtheta},
              {"dD_dpsi", c.derivatives->dpsi},
              {"used_fallback", c.used_fallback},
              {"identities",
               {{"normal_direction", ir.normal_direction},
                {"moment_arm", ir.moment_arm},
                {"gamma_collinearity", ir.gamma_collinearity},
                {"normal_direction_dtheta", ir.normal_direction_dtheta},
                {"gamma_collinearity_dtheta", ir.gamma_collinearity_dtheta}}},
              {"config_hash", config_hash(body_json)}};
  out << rec.dump() << "\n";
  return kExitOk;
}

int cmd_scatter(const Common& c, const std::string& v_text, std::ostream& out) {
  const RunConfig cfg = load_with_overrides(c);
  const Vector6d V = parse_velocity(v_text);
  const Beta beta = cfg.beta.value_or(Beta(0.0, 0.0, 0.0));
  const Frame frame = build_frame(cfg.body, beta, cfg.sim.contact);
  const ScatterMatrix sm = scattering_matrix(cfg.family, frame);
  const ScatterResult res = apply_scattering(sm, V, cfg.sim.grazing_tol);
  const ScatterReport rep = verify_scattering(sm, 100, cfg.seed);
  // Bodies placed at the contact configuration, first centre at the origin.
  Vector6d X;
  X << 0.0, 0.0, frame.d * unit_direction(beta.psi), beta.theta, beta.thetabar;
  const Ledger before = ledger(cfg.body.mass_props(), State{X, V, 0.0});
  const Ledger after = ledger(cfg.body.mass_props(), State{X, res.V, 0.0});
  json rec = {{"family", cfg.family.name()},
              {"V", to_json(V)},
              {"V_post", to_json(res.V)},
              {"grazing", res.grazing},
              {"normal_pre", res.normal_pre},
              {"normal_post", res.normal_post},
              {"residuals",
               {{"ledger_jump", ledger_jump(before, after)},
                {"involution", (sm.s * res.V - V).norm()},
                {"determinant", rep.determinant},
                {"symmetry", rep.symmetry},
                {"orthogonality", rep.orthogonality},
                {"eigen_structure", rep.eigen_structure}}},
              {"config_hash", cfg.hash}};
  out << rec.dump() << "\n";
  return kExitOk;
}

json sample_record(const Sample& s, const std::string& hash) {
  return {{"t", s.t},          {"X", to_json(s.X)}, {"V", to_json(s.V)}, {"event", s.event},
          {"ledger", to_json(s.ledger)}, {"gap", s.gap}, {"config_hash", hash}};
}

int cmd_simulate(const Common& c, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_with_overrides(c);
  if (!cfg.initial) throw ValidationError("initial: missing");
  SimOptions opts = cfg.sim;
  if (!(opts.sample_dt > 0.0)) opts.sample_dt = cfg.T / 100.0;
  const Trajectory tr = simulate(cfg.body, *cfg.initial, cfg.family, cfg.T, opts);

  std::ofstream file;
  if (!out_path.empty()) file = open_out(out_path);
  std::ostream& sink = out_path.empty() ? out : file;
  for (const Sample& s : tr.samples) sink << sample_record(s, cfg.hash).dump() << "\n";
  Sample last;
  last.t = tr.final.t;
  last.X = tr.final.X;
  last.V = tr.final.V;
  last.ledger = ledger(cfg.body.mass_props(), tr.final);
  last.gap = gap(cfg.body, tr.final.X, opts.contact);
  if (tr.samples.empty() || tr.samples.back().t < last.t) sink << sample_record(last, cfg.hash).dump() << "\n";

  if (!c.quiet) {
    json summary = {{"family", cfg.family.name()},
                    {"events", tr.events.size()},
                    {"min_gap", tr.min_gap},
                    {"max_ledger_jump", tr.max_ledger_jump},
                    {"total_ledger_drift", tr.total_ledger_drift},
                    {"grazing_events", tr.grazing_events},
                    {"config_hash", cfg.hash}};
    err << summary.dump() << "\n";
  }
  return kExitOk;
}

int cmd_nonuniq(const Common& c, const std::string& out_path, const std::string& csv_path, std::ostream& out,
                std::ostream& err) {
  const RunConfig cfg = load_with_overrides(c);
  const State z0 = cfg.initial.value_or(nonuniqueness_datum());
  const std::vector<ScatteringFamily> families = cfg.families.empty() ? nonuniqueness_families() : cfg.families;
  const DivergenceReport rep = divergence_report(cfg.body, z0, families, cfg.T, cfg.sim);

  json runs = json::array();
  for (const FamilyRun& r : rep.runs) {
    runs.push_back({{"family", r.name},
                    {"events", r.trajectory.events.size()},
                    {"first_post_velocity", to_json(r.first_post_velocity)},
                    {"conservation_residual", r.conservation_residual}});
  }
  auto matrix = [](const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      a.push_back(row);
    }
    return a;
  };
  json rec = {{"runs", runs},
              {"velocity_divergence", matrix(rep.velocity_divergence)},
              {"state_divergence", matrix(rep.state_divergence)},
              {"min_pairwise_velocity_divergence", rep.min_pairwise_velocity_divergence},
              {"max_conservation_residual", rep.max_conservation_residual},
              {"speed_scale", rep.speed_scale},
              {"degenerate", rep.degenerate},
              {"all_conserve", rep.all_conserve},
              {"all_distinct", rep.all_distinct},
              {"config_hash", cfg.hash}};
  if (out_path.empty()) {
    out << rec.dump() << "\n";
  } else {
    std::ofstream f = open_out(out_path);
    f << rec.dump() << "\n";
  }

  std::ofstream csv = open_out(csv_path);
  csv << "family,t,x1,x2,xbar1,xbar2,theta,thetabar,v1,v2,vbar1,vbar2,w,wbar,events,config_hash\n";
  for (const FamilyRun& r : rep.runs) {
    const State& z = r.trajectory.final;
    csv << '"' << r.name << '"' << ',' << z.t;
    for (int i = 0; i < 6; ++i) csv << ',' << z.X(i);
    for (int i = 0; i < 6; ++i) csv << ',' << z.V(i);
    csv << ',' << r.trajectory.events.size() << ',' << cfg.hash << "\n";
  }
  if (!c.quiet) err << "nonuniq: " << rep.runs.size() << " families, final states in " << csv_path << "\n";
  if (rep.degenerate) throw ValidationError("no collision within T for some family; report is degenerate");
  return kExitOk;
}

int cmd_invariants(const Common& c, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_with_overrides(c);
  std::vector<ScatteringFamily> families = cfg.families;
  if (families.empty()) {
    families = {ScatteringFamily::reflection(), ScatteringFamily::epsi(),
                ScatteringFamily::orientation_preserving(LineField::constant(kPi / 4.0))};
  }
  const MassProps mp = cfg.body.mass_props();
  const std::vector<InvariantCandidate> cands = {
      InvariantCandidate::constant(),
      InvariantCandidate::momentum_x(),
      InvariantCandidate::momentum_y(),
      InvariantCandidate::kinetic_energy(mp),
      InvariantCandidate::theta_function("sin(theta)", [](double t) { return std::sin(t); }),
      InvariantCandidate::angular_speed()};

  std::ofstream file;
  if (!out_path.empty()) file = open_out(out_path);
  std::ostream& sink = out_path.empty() ? out : file;
  const auto old_precision = sink.precision(17);
  sink << "candidate,family,residual,samples,seed,config_hash\n";
  for (const ScatteringFamily& fam : families) {
    if (!c.quiet) err << "invariants: " << fam.name() << "\n";
    const std::vector<CollisionSample> samples = sample_collisions(cfg.body, fam, cfg.samples, cfg.seed);
    for (const InvariantCandidate& cand : cands) {
      sink << '"' << cand.name << "\",\"" << fam.name() << "\"," << invariant_residual(samples, cand) << ','
           << cfg.samples << ',' << cfg.seed << ',' << cfg.hash << "\n";
    }
    sink << "\"maxwellian\",\"" << fam.name() << "\","
         << maxwellian_residual(samples, mp, cfg.bulk_velocity, cfg.temperature) << ',' << cfg.samples << ','
         << cfg.seed << ',' << cfg.hash << "\n";
  }
  sink.precision(old_precision);
  return kExitOk;
}

int cmd_verify(const Common& c, std::ostream& out, std::ostream& err) {
  std::uint64_t seed = 20261015;
  std::string hash = config_hash(json::object());
  if (!c.config.empty()) {
    const RunConfig cfg = load_with_overrides(c);
    seed = cfg.seed;
    hash = cfg.hash;
  } else if (c.seed) {
    seed = *c.seed;
  }
  int failed = 0;
  const std::vector<CheckResult> results = run_all_checks(seed);
  for (const CheckResult& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << r.seconds << " s)\n";
    if (!c.quiet) {
      for (const auto& [k, v] : r.metrics) err << "    " << k << " = " << v << "\n";
    }
    if (!r.pass) ++failed;
  }
  out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << " seed=" << seed
      << " config_hash=" << hash << "\n";
  return failed == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-body hard-particle scattering toolkit", "hardpair"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "override the config seed");
  app.add_flag("--quiet", common.quiet, "suppress progress output");

  std::string body_file;
  double theta = 0.0, thetabar = 0.0, psi = 0.0;
  CLI::App* geometry = app.add_subcommand("geometry", "contact data and identity residuals at one beta");
  geometry->add_option("--body", body_file, "JSON file holding a body (or a config with a body)")->required();
  geometry->add_option("--theta", theta)->required();
  geometry->add_option("--thetabar", thetabar)->required();
  geometry->add_option("--psi", psi)->required();

  std::string v_text, out_path, csv_path = "final_states.csv";
  CLI::App* scatter = app.add_subcommand("scatter", "apply one scattering matrix");
  scatter->add_option("--config", common.config)->required();
  scatter->add_option("--V", v_text, "six comma-separated numbers")->required();

  CLI::App* sim = app.add_subcommand("simulate", "event-driven trajectory as JSONL");
  sim->add_option("--config", common.config)->required();
  sim->add_option("--out", out_path, "JSONL output (default stdout)");

  CLI::App* nonuniq = app.add_subcommand("nonuniq", "divergence report across scattering families");
  nonuniq->add_option("--config", common.config)->required();
  nonuniq->add_option("--out", out_path, "JSON report (default stdout)");
  nonuniq->add_option("--csv", csv_path, "CSV of per-family final states");

  CLI::App* invariants = app.add_subcommand("invariants", "collision-invariant residual table as CSV");
  invariants->add_option("--config", common.config)->required();
  invariants->add_option("--out", out_path, "CSV output (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "run the full property suite");
  verify->add_option("--config", common.config);

  for (CLI::App* sub : {geometry, scatter, sim, nonuniq, invariants, verify}) {
    sub->add_option("--seed", common.seed, "override the config seed");
    sub->add_flag("--quiet", common.quiet, "suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (geometry->parsed()) return cmd_geometry(body_file, theta, thetabar, psi, out);
    if (scatter->parsed()) return cmd_scatter(common, v_text, out);
    if (sim->parsed()) return cmd_simulate(common, out_path, out, err);
    if (nonuniq->parsed()) return cmd_nonuniq(common, out_path, csv_path, out, err);
    if (invariants->parsed()) return cmd_invariants(common, out_path, out, err);
    if (verify->parsed()) return cmd_verify(common, out, err);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace hardpair
