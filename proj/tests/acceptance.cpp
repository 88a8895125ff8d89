#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "fixtures.hpp"
#include "papdyn/commands.hpp"
#include "papdyn/dde.hpp"
#include "papdyn/fixedpoint.hpp"
#include "papdyn/measures.hpp"
#include "papdyn/stability.hpp"

using namespace papdyn;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome golden_constants() {
  const RunConfig cfg = fixtures::example_4_1();
  const CommandResult r = run_command(cfg, Command::Check);
  const HypothesisReport rep = check_hypotheses(cfg.model, cfg.mu, cfg.nu, cfg.hypothesis_options());
  const M7Constants& k = *rep.m7;
  const double tol = 1e-12;
  const bool ok = std::abs(k.L - 0.4) <= tol && std::abs(k.p1 - 0.75) <= tol && std::abs(k.q1 - 0.9) <= tol &&
                  rep.ball_radius && std::abs(*rep.ball_radius - 1.2) <= tol && r.exit_code == kExitPass;
  return {ok, fmt("L=%.17g p1=%.17g q1=%.17g radius=%.17g exit=%d", k.L, k.p1, k.q1, rep.ball_radius.value_or(NAN),
                  r.exit_code)};
}

Outcome measure_bounds() {
  const WeightedMeasure mu = WeightedMeasure::from_density("rho1", Expr::parse("exp(sin(t))"));
  const double e = std::exp(1.0);
  bool ok = true;
  std::string detail;
  for (double r : {1.0, 10.0, 100.0}) {
    const double m = mu.mass(-r, r);
    ok = ok && m >= 2 * r / e && m <= 2 * e * r;
    detail += fmt("mu([-%g,%g])=%.10g in [%.6g, %.6g]; ", r, r, m, 2 * r / e, 2 * e * r);
  }
  return {ok, detail};
}

Outcome integrator() {
  const NetModel m = fixtures::linear_scalar(0.0, -1.0, 1.0, 1.0);
  const double err = std::abs(integrate(m, 2.0, 1e-3).sample(2.0, 0) + 0.5);
  const double exact6 = -41.0 / 720.0;
  const double e1 = std::abs(integrate(m, 6.0, 0.1).sample(6.0, 0) - exact6);
  const double e2 = std::abs(integrate(m, 6.0, 0.05).sample(6.0, 0) - exact6);
  const double factor = e1 / e2;
  return {err <= 1e-6 && factor >= 12.0 && factor <= 20.0,
          fmt("|x(2)+0.5|=%.3g; order factor %.4g at x(6) = -41/720 (steps 0.1 -> 0.05)", err, factor)};
}

PicardResult picard_cache;

Outcome picard() {
  const RunConfig cfg = fixtures::example_4_1();
  picard_cache = picard_solve(cfg.model);
  const PicardResult& r = picard_cache;
  const BallCheck ball = ball_check(r.solution, r.phi0, 1.2, r.compare_lo);
  return {r.converged && r.empirical_ratio <= 0.95 && r.residual <= 1e-7 && ball.inside,
          fmt("%d iterations, ratio %.4g, residual %.3g, ||x*-phi0|| %.4g <= 1.2, window [%g, %g] compared from %g",
              r.iterations, r.empirical_ratio, r.residual, ball.distance, r.t_lo, r.t_hi, r.compare_lo)};
}

Outcome restart() {
  const RunConfig cfg = fixtures::example_4_1();
  const PicardResult& r = picard_cache;
  if (!r.converged) return {false, "no Picard solution"};
  const double theta = cfg.model.theta();
  const double t0 = std::ceil(r.compare_lo + theta);
  const Trajectory traj = integrate(cfg.model, history_from(r.solution, t0, theta), t0, t0 + 10.0, 1e-3);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.nodes(); ++k)
    for (std::size_t c = 0; c < cfg.model.n; ++c)
      worst = std::max(worst, std::abs(traj.value(k)[c] - r.solution.value(traj.time(k), c)));
  return {worst <= 1e-4, fmt("sup |x_dde - x*| = %.3g over [%g, %g]", worst, t0, t0 + 10.0)};
}

Outcome stability() {
  const RunConfig cfg = fixtures::example_4_1();
  const DecayCertificate cert = decay_rate(cfg.model);
  bool margins = cert.lambda > 0.0;
  for (double m : cert.margin_check) margins = margins && m < 1.0;
  bool holds = true;
  double worst = 0.0;
  for (unsigned p = 0; p < 5; ++p) {
    const EnvelopeReport env = verify_decay(cfg.model, random_history(2, 1000 + 2 * p, 1.0),
                                            random_history(2, 1001 + 2 * p, 1.0), cert, 20.0);
    holds = holds && env.holds;
    worst = std::max(worst, env.worst_ratio);
  }
  bool falsified_rejected = false;
  for (double m : margin_check(cfg.model, 5 * cert.lambda)) falsified_rejected = falsified_rejected || m >= 1.0;
  DecayCertificate fake = cert;
  fake.lambda *= 5.0;
  return {margins && holds && falsified_rejected,
          fmt("lambda=%.6g M=%.6g margins (%.4g, %.4g); 5 pairs worst norm/bound %.3g; 5*lambda margins (%.4g, %.4g) "
              "rejected=%d",
              cert.lambda, cert.M, cert.margin_check[0], cert.margin_check[1], worst,
              margin_check(cfg.model, fake.lambda)[0], margin_check(cfg.model, fake.lambda)[1],
              static_cast<int>(falsified_rejected))};
}

Outcome toy_root() {
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (2.0 - mid - std::exp(mid) > 0.0 ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  const double root = decay_rate(fixtures::toy_scalar()).eps_star[0];
  return {std::abs(root - 0.44285) <= 1e-4 && std::abs(root - oracle) <= 1e-4,
          fmt("root %.15g, oracle %.15g", root, oracle)};
}

Outcome ergodic_suite() {
  const WeightedMeasure leb = WeightedMeasure::lebesgue();
  const ErgodicVerdict good = ergodicity_trend(SignalExpr::parse("exp(-abs(t))"), leb, leb);
  const ErgodicVerdict bad = ergodicity_trend([](double t) { return std::abs(std::sin(t)); }, leb, leb);
  const double two_over_pi = 2.0 / std::acos(-1.0);
  bool ok = good.passed && std::abs(good.trend_slope + 1.0) <= 0.1 && good.remainders.back() < 1e-2 && !bad.passed &&
            std::abs(bad.remainders.back() - two_over_pi) <= 0.02;

  const WeightedMeasure mu = WeightedMeasure::from_density("rho1", Expr::parse("exp(sin(t))"));
  const WeightedMeasure nu = WeightedMeasure::two_piece("rho2", Expr::parse("exp(t)"), Expr::parse("1"));
  const SignalExpr y = SignalExpr::parse("(2*sin(t) + exp(-t))/10");
  const SignalExpr z = SignalExpr::parse("(4*cos(t) + exp(-t))/10");
  const auto [y1, y2] = decompose(y);
  const auto [z1, z2] = decompose(z);
  const auto product_erg = [&](double t) {
    return y1.eval(t) * z2.eval(t) + y2.eval(t) * z1.eval(t) + y2.eval(t) * z2.eval(t);
  };
  bool product_ok = ergodicity_trend(product_erg, mu, nu, kDefaultZSchedule, 1e-2, 0.0).passed;
  for (double zv : kDefaultZSchedule) {
    const double bound = sup_abs_bound(y1, 0.0) * ergodic_remainder(z2, mu, nu, zv) +
                         sup_abs_bound(z1, 0.0) * ergodic_remainder(y2, mu, nu, zv) +
                         sup_abs_bound(y2, 0.0) * ergodic_remainder(z2, mu, nu, zv);
    product_ok = product_ok && ergodic_remainder(product_erg, mu, nu, zv, 0.0) <= bound * (1 + 1e-9);
  }

  const double theta = 1.0;
  const auto lip = [](double s) { return 1.0 + std::exp(-std::abs(s)); };
  const auto comp_erg = [&](double s) { return lip(s) * (std::sin(y.eval(s - theta)) - std::sin(y1.eval(s - theta))); };
  bool comp_ok = ergodicity_trend(comp_erg, mu, nu, kDefaultZSchedule, 1e-2, theta).passed;
  for (double zv : kDefaultZSchedule) {
    const double lhs = mu.integrate([&](double s) { return std::abs(comp_erg(s)); }, theta, zv);
    const double lp = std::sqrt(mu.integrate([&](double s) { return lip(s) * lip(s); }, theta, zv));
    const double yq = std::sqrt(mu.integrate([&](double s) { return std::pow(y2.eval(s - theta), 2); }, theta, zv));
    comp_ok = comp_ok && lhs <= lp * yq * (1 + 1e-9);
  }
  ok = ok && product_ok && comp_ok;
  return {ok, fmt("e^-|t| slope %.4g final %.3g; |sin t| final %.5g (2/pi %.5g); product %s; composition %s",
                  good.trend_slope, good.remainders.back(), bad.remainders.back(), two_over_pi,
                  product_ok ? "ok" : "FAILED", comp_ok ? "ok" : "FAILED")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 golden constants", 1.0, golden_constants},
      {"2 measure bounds", 1.0, measure_bounds},
      {"3 integrator", 1.0, integrator},
      {"4 Picard convergence", 60.0, picard},
      {"5 fixed point solves the DDE", 10.0, restart},
      {"6 stability certificate and envelope", 10.0, stability},
      {"7 scalar toy root", 1.0, toy_root},
      {"8 ergodic and closure suite", 5.0, ergodic_suite},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.passed && secs < c.budget_s;
    failures += !pass;
    std::printf("%s  [%s]  %.3fs (budget %gs)  %s\n", pass ? "PASS" : "FAIL", c.name, secs, c.budget_s, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
