#include "papdyn/commands.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "json.hpp"

#include "papdyn/error.hpp"
#include "papdyn/stability.hpp"

namespace papdyn {

using nlohmann::ordered_json;

namespace {

std::string short_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + short_real(v[k]);
  return s + ")";
}

// Non-finite values become strings.
ordered_json jreal(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

ordered_json jreals(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(jreal(x));
  return a;
}

std::string bar_matrix(const std::vector<double>& m, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += "    ";
    for (std::size_t j = 0; j < n; ++j) s += (j ? "  " : "") + short_real(m[i * n + j]);
    s += "\n";
  }
  return s;
}

CommandResult run_check(const RunConfig& cfg) {
  const HypothesisReport rep = check_hypotheses(cfg.model, cfg.mu, cfg.nu, cfg.hypothesis_options());
  const std::size_t n = cfg.model.n;
  std::ostringstream os;
  ordered_json j;
  os << "check: " << cfg.name << "\n";
  os << "domain [" << short_real(rep.domain_floor) << ", inf)\n";
  j["command"] = "check";
  j["name"] = cfg.name;
  j["domain_floor"] = jreal(rep.domain_floor);
  if (!rep.bar.d.empty()) {
    os << "bar_d\n" << bar_matrix(rep.bar.d, n) << "bar_a\n" << bar_matrix(rep.bar.a, n);
    os << "bar_I " << list(rep.bar.I) << "\n";
    j["bar_d"] = jreals(rep.bar.d);
    j["bar_a"] = jreals(rep.bar.a);
    j["bar_b"] = jreals(rep.bar.b);
    j["bar_I"] = jreals(rep.bar.I);
  }
  if (!rep.c_star.empty()) {
    os << "c* " << list(rep.c_star) << "\n";
    j["c_star"] = jreals(rep.c_star);
  }
  os << "variant " << rep.variant << "\n";
  j["variant"] = rep.variant;
  if (rep.m7) {
    os << "L = " << short_real(rep.m7->L) << "\n";
    os << "p1 = " << short_real(rep.m7->p1) << "  rows " << list(rep.m7->p1_rows) << "\n";
    os << "q1 = " << short_real(rep.m7->q1) << "  rows " << list(rep.m7->q1_rows) << "\n";
    j["L"] = jreal(rep.m7->L);
    j["p1"] = jreal(rep.m7->p1);
    j["q1"] = jreal(rep.m7->q1);
    j["p1_rows"] = jreals(rep.m7->p1_rows);
    j["q1_rows"] = jreals(rep.m7->q1_rows);
  }
  if (rep.m5) {
    os << "p = " << short_real(rep.m5->p) << ", q = " << short_real(rep.m5->q) << "\n";
    os << "p0 = " << short_real(rep.m5->p0) << "\n";
    os << "q0 = " << short_real(rep.m5->q0) << "\n";
    j["p"] = jreal(rep.m5->p);
    j["q"] = jreal(rep.m5->q);
    j["p0"] = jreal(rep.m5->p0);
    j["q0"] = jreal(rep.m5->q0);
  }
  if (rep.ball_radius) {
    os << "ball radius = " << short_real(*rep.ball_radius) << "\n";
    j["ball_radius"] = jreal(*rep.ball_radius);
  }
  os << "verdicts\n";
  ordered_json vj = ordered_json::object();
  for (const auto& [id, v] : rep.verdicts) {
    os << "  " << id << "  " << (!v.applicable ? "n/a " : v.passed ? "PASS" : "FAIL") << (v.numeric ? "  (numeric)" : "")
       << "  " << v.detail << "\n";
    vj[id] = {{"passed", v.passed}, {"applicable", v.applicable}, {"numeric", v.numeric}, {"detail", v.detail}};
  }
  j["verdicts"] = vj;
  os << "overall " << (rep.overall_pass ? "PASS" : "FAIL") << "\n";
  j["overall_pass"] = rep.overall_pass;

  CommandResult r;
  r.exit_code = rep.overall_pass ? kExitPass : kExitVerdict;
  r.text = os.str();
  r.json = j.dump(2) + "\n";
  return r;
}

CommandResult run_simulate(const RunConfig& cfg) {
  const Trajectory traj = integrate(cfg.model, cfg.settings.t_end, cfg.settings.step);
  std::ostringstream os;
  os << "simulate: " << cfg.name << "\n";
  os << "t in [0, " << short_real(traj.t_end()) << "], step " << short_real(traj.step()) << ", " << traj.nodes()
     << " nodes\n";
  const auto last = traj.value(traj.nodes() - 1);
  os << "x(t_end) = " << list({last.begin(), last.end()}) << "\n";
  ordered_json j;
  j["command"] = "simulate";
  j["name"] = cfg.name;
  j["t_end"] = traj.t_end();
  j["step"] = traj.step();
  j["nodes"] = traj.nodes();
  j["final_state"] = jreals({last.begin(), last.end()});
  j["artifacts"] = {"trajectory.csv"};

  CommandResult r;
  r.text = os.str();
  r.json = j.dump(2) + "\n";
  r.artifacts.emplace_back("trajectory.csv", trajectory_csv(traj));
  return r;
}

PicardOptions picard_options(const Settings& s) {
  PicardOptions o;
  o.t_lo = s.picard_lo;
  o.t_hi = s.picard_hi;
  o.step = s.picard_step;
  o.eps_tail = s.eps_tail;
  o.tol = s.tol;
  o.max_iter = s.max_iter;
  return o;
}

CommandResult run_solve(const RunConfig& cfg) {
  const PicardResult pr = picard_solve(cfg.model, picard_options(cfg.settings));
  const BallCheck ball = ball_check(pr.solution, pr.phi0, pr.radius, pr.compare_lo);
  std::ostringstream os;
  os << "solve: " << cfg.name << "\n";
  os << "window [" << short_real(pr.t_lo) << ", " << short_real(pr.t_hi) << "], compared on ["
     << short_real(pr.compare_lo) << ", " << short_real(pr.t_hi) << "]";
  if (pr.window_shift > 0) os << " (moved right by " << short_real(pr.window_shift) << ")";
  os << "\n";
  os << "iteration  sup_diff  ratio\n";
  ordered_json table = ordered_json::array();
  for (std::size_t k = 0; k < pr.sup_diffs.size(); ++k) {
    const double ratio = k && pr.sup_diffs[k - 1] > 0 ? pr.sup_diffs[k] / pr.sup_diffs[k - 1] : 0.0;
    os << "  " << (k + 1) << "  " << short_real(pr.sup_diffs[k]);
    if (k) os << "  " << short_real(ratio);
    os << "\n";
    table.push_back({{"iteration", k + 1}, {"sup_diff", jreal(pr.sup_diffs[k])}});
  }
  os << (pr.converged ? "converged" : "NOT converged") << " after " << pr.iterations << " iterations\n";
  os << "contraction constant q1 = " << short_real(pr.q) << ", empirical ratio = " << short_real(pr.empirical_ratio)
     << "\n";
  os << "residual = " << short_real(pr.residual) << "\n";
  os << "distance to phi0 = " << short_real(ball.distance) << ", radius = " << short_real(pr.radius) << ", "
     << (ball.inside ? "inside" : "OUTSIDE") << "\n";
  const bool pass = pr.converged && ball.inside;

  ordered_json j;
  j["command"] = "solve";
  j["name"] = cfg.name;
  j["t_lo"] = pr.t_lo;
  j["t_hi"] = pr.t_hi;
  j["compare_lo"] = pr.compare_lo;
  j["window_shift"] = pr.window_shift;
  j["iterations"] = pr.iterations;
  j["converged"] = pr.converged;
  j["sup_diffs"] = table;
  j["q1"] = jreal(pr.q);
  j["empirical_ratio"] = jreal(pr.empirical_ratio);
  j["residual"] = jreal(pr.residual);
  j["radius"] = jreal(pr.radius);
  j["distance"] = jreal(ball.distance);
  j["ball_margin"] = jreal(pr.radius - ball.distance);
  j["inside"] = ball.inside;
  j["passed"] = pass;
  j["artifacts"] = {"solution.csv", "phi0.csv"};

  CommandResult r;
  r.exit_code = pass ? kExitPass : kExitVerdict;
  r.text = os.str();
  r.json = j.dump(2) + "\n";
  r.artifacts.emplace_back("solution.csv", candidate_csv(pr.solution));
  r.artifacts.emplace_back("phi0.csv", candidate_csv(pr.phi0));
  return r;
}

std::string envelope_csv(const EnvelopeReport& env, double t0) {
  std::string out = "t,norm,bound\n";
  for (std::size_t k = 0; k < env.times.size(); ++k)
    out += format_real(t0 + env.times[k]) + "," + format_real(env.norms[k]) + "," + format_real(env.bounds[k]) + "\n";
  return out;
}

CommandResult run_stability(const RunConfig& cfg) {
  const Settings& s = cfg.settings;
  const DecayCertificate cert = decay_rate(cfg.model, s.safety);
  std::ostringstream os;
  ordered_json j;
  os << "stability: " << cfg.name << "\n";
  os << "eps* " << list(cert.eps_star) << "\n";
  os << "eta = " << short_real(cert.eta) << ", lambda = " << short_real(cert.lambda) << ", M = " << short_real(cert.M)
     << "\n";
  os << "margin check " << list(cert.margin_check) << "\n";
  bool margins = true;
  for (double m : cert.margin_check) margins = margins && m < 1.0;
  j["command"] = "stability";
  j["name"] = cfg.name;
  j["eps_star"] = jreals(cert.eps_star);
  j["eta"] = cert.eta;
  j["lambda"] = cert.lambda;
  j["M"] = cert.M;
  j["margin_check"] = jreals(cert.margin_check);
  j["margins_ok"] = margins;

  CommandResult r;
  bool holds = true;
  ordered_json runs = ordered_json::array();
  auto record = [&](const std::string& label, const EnvelopeReport& env, double t0, const std::string& file) {
    holds = holds && env.holds;
    os << label << ": " << (env.holds ? "holds" : "VIOLATED");
    if (!env.holds) os << " first at t = " << short_real(t0 + env.first_violation);
    os << ", ||phi|| = " << short_real(env.phi_norm) << ", worst norm/bound = " << short_real(env.worst_ratio)
       << ", fitted slope = " << short_real(env.fitted_slope) << "\n";
    runs.push_back({{"label", label},
                    {"t0", t0},
                    {"holds", env.holds},
                    {"first_violation", env.holds ? ordered_json(nullptr) : ordered_json(t0 + env.first_violation)},
                    {"phi_norm", jreal(env.phi_norm)},
                    {"worst_ratio", jreal(env.worst_ratio)},
                    {"fitted_slope", jreal(env.fitted_slope)},
                    {"file", file}});
    r.artifacts.emplace_back(file, envelope_csv(env, t0));
  };

  if (s.stability_mode == StabilityMode::Pairs) {
    j["mode"] = "pairs";
    for (int p = 0; p < s.pairs; ++p) {
      const unsigned base = s.seed * 7919u + static_cast<unsigned>(p) * 2u;
      const History ha = random_history(cfg.model.n, base, s.amplitude);
      const History hb = random_history(cfg.model.n, base + 1u, s.amplitude);
      const EnvelopeReport env = verify_decay(cfg.model, ha, hb, cert, s.horizon, s.step);
      record("pair " + std::to_string(p + 1), env, 0.0, "envelope_" + std::to_string(p + 1) + ".csv");
    }
  } else {
    j["mode"] = "picard";
    const PicardResult pr = picard_solve(cfg.model, picard_options(s));
    if (!pr.converged) throw NumericalError("Picard iteration did not converge; no reference solution");
    const double theta = cfg.model.theta();
    const double t0 = std::ceil((pr.compare_lo + theta) / s.step) * s.step;
    if (t0 + s.horizon > pr.t_hi)
      throw ContractError("stability horizon exceeds the Picard window; enlarge picard_window");
    const History ref = history_from(pr.solution, t0, theta);
    for (int p = 0; p < s.pairs; ++p) {
      const History ha = random_history(cfg.model.n, s.seed * 7919u + static_cast<unsigned>(p), s.amplitude);
      const EnvelopeReport env = verify_decay(cfg.model, ha, ref, cert, s.horizon, s.step, t0);
      record("solution " + std::to_string(p + 1) + " vs Picard", env, t0, "envelope_" + std::to_string(p + 1) + ".csv");
    }
  }
  j["runs"] = runs;
  const bool pass = margins && holds;
  j["passed"] = pass;
  os << "overall " << (pass ? "PASS" : "FAIL") << "\n";
  r.exit_code = pass ? kExitPass : kExitVerdict;
  r.text = os.str();
  r.json = j.dump(2) + "\n";
  return r;
}

CommandResult run_ergodic(const RunConfig& cfg) {
  const Settings& s = cfg.settings;
  const NetModel& m = cfg.model;
  const std::size_t n = m.n;
  std::vector<std::pair<std::string, const SignalExpr*>> signals;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string si = std::to_string(i + 1);
    signals.emplace_back("c[" + si + "]", &m.c[i]);
    signals.emplace_back("I[" + si + "]", &m.I[i]);
    for (std::size_t k = 0; k < n; ++k) {
      const std::string sk = std::to_string(k + 1);
      signals.emplace_back("d[" + si + "][" + sk + "]", &m.d[i * n + k]);
      signals.emplace_back("a[" + si + "][" + sk + "]", &m.a[i * n + k]);
      for (std::size_t l = 0; l < n; ++l)
        signals.emplace_back("b[" + si + "][" + sk + "][" + std::to_string(l + 1) + "]", &m.b_at(i, k, l));
    }
  }
  auto weights = [&](const char* name, const std::vector<ActivationSpec>& acts) {
    for (std::size_t k = 0; k < acts.size(); ++k)
      if (acts[k].lipschitz_weight())
        signals.emplace_back(std::string("L_") + name + "[" + std::to_string(k + 1) + "]", &*acts[k].lipschitz_weight());
  };
  weights("f", m.f);
  weights("g", m.g);
  weights("h", m.h);

  std::ostringstream os;
  os << "ergodic: " << cfg.name << "\n";
  os << "measures mu = " << cfg.mu.name() << ", nu = " << cfg.nu.name() << "\n";
  ordered_json list_j = ordered_json::array();
  bool pass = true;
  std::size_t checked = 0;
  for (const auto& [label, sig] : signals) {
    const SignalExpr erg = decompose(*sig).second;
    if (erg.is_zero()) continue;
    ++checked;
    const ErgodicVerdict v = ergodicity_trend(erg, cfg.mu, cfg.nu, s.z_schedule, s.ergodic_threshold);
    pass = pass && v.passed;
    os << "  " << label << "  " << erg.to_string() << "  " << (v.passed ? "PASS" : "FAIL")
       << "  slope " << short_real(v.trend_slope) << "  remainders " << list(v.remainders) << "\n";
    list_j.push_back({{"signal", label},
                      {"ergodic_part", erg.to_string()},
                      {"z_values", jreals(v.z_values)},
                      {"remainders", jreals(v.remainders)},
                      {"trend_slope", jreal(v.trend_slope)},
                      {"threshold", v.threshold},
                      {"passed", v.passed}});
  }
  if (checked == 0) os << "  no ergodic parts\n";
  os << "overall " << (pass ? "PASS" : "FAIL") << "\n";
  ordered_json j;
  j["command"] = "ergodic";
  j["name"] = cfg.name;
  j["mu"] = cfg.mu.name();
  j["nu"] = cfg.nu.name();
  j["signals"] = list_j;
  j["passed"] = pass;

  CommandResult r;
  r.exit_code = pass ? kExitPass : kExitVerdict;
  r.text = os.str();
  r.json = j.dump(2) + "\n";
  return r;
}

}  // namespace

std::optional<Command> command_from_name(std::string_view name) {
  if (name == "check") return Command::Check;
  if (name == "simulate") return Command::Simulate;
  if (name == "solve") return Command::Solve;
  if (name == "stability") return Command::Stability;
  if (name == "ergodic") return Command::Ergodic;
  return std::nullopt;
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::Check: return "check";
    case Command::Simulate: return "simulate";
    case Command::Solve: return "solve";
    case Command::Stability: return "stability";
    case Command::Ergodic: return "ergodic";
  }
  return "?";
}

CommandResult run_command(const RunConfig& config, Command command) {
  switch (command) {
    case Command::Check: return run_check(config);
    case Command::Simulate: return run_simulate(config);
    case Command::Solve: return run_solve(config);
    case Command::Stability: return run_stability(config);
    case Command::Ergodic: return run_ergodic(config);
  }
  throw ContractError("unknown command");
}

int exit_code_for(const std::exception& e) {
  return dynamic_cast<const ConfigError*>(&e) ? kExitConfig : kExitNumerical;
}

std::string candidate_csv(const CandidateFunction& phi) {
  std::string out = "t";
  for (std::size_t c = 0; c < phi.dim(); ++c) out += ",x_" + std::to_string(c + 1);
  out += "\n";
  for (std::size_t k = 0; k < phi.nodes(); ++k) {
    out += format_real(phi.time(k));
    for (std::size_t c = 0; c < phi.dim(); ++c) out += "," + format_real(phi.at(k, c));
    out += "\n";
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_csv(traj, os);
  return os.str();
}

History random_history(std::size_t dim, unsigned seed, double amplitude) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a(dim), b(dim), w(dim), p(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double share = 0.5 * (unit(rng) + 1.0);
    a[i] = amplitude * share * unit(rng);
    b[i] = amplitude * (1.0 - share) * unit(rng);
    w[i] = 0.5 + 1.5 * (unit(rng) + 1.0);
    p[i] = 3.14159265358979 * unit(rng);
  }
  return History::function(dim, [a, b, w, p](double t, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i] * std::sin(w[i] * t + p[i]);
  });
}

}  // namespace papdyn
