#include "papdyn/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "papdyn/error.hpp"

namespace papdyn {

namespace {

std::string entry_name(const char* sym, std::initializer_list<std::size_t> idx) {
  std::string s = sym;
  for (std::size_t k : idx) s += "[" + std::to_string(k + 1) + "]";
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

template <typename T>
void require_size(const std::vector<T>& v, std::size_t expected, const char* what) {
  if (v.size() != expected)
    throw ConfigError(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                      std::to_string(expected));
}

}  // namespace

NetModel NetModel::zeros(std::size_t n) {
  NetModel m;
  m.n = n;
  m.c.assign(n, SignalExpr{});
  m.I.assign(n, SignalExpr{});
  m.d.assign(n * n, SignalExpr{});
  m.a.assign(n * n, SignalExpr{});
  m.b.assign(n * n * n, SignalExpr{});
  m.tau.assign(n * n, 1.0);
  m.sigma.assign(n * n, 1.0);
  m.nu_delay.assign(n * n, 1.0);
  m.f.assign(n, ActivationSpec::sine());
  m.g.assign(n, ActivationSpec::sine());
  m.h.assign(n, ActivationSpec::sine());
  m.history = History::constant(std::vector<double>(n, 0.0));
  return m;
}

double NetModel::theta() const {
  double t = 0.0;
  for (const auto* v : {&tau, &sigma, &nu_delay})
    for (double x : *v) t = std::max(t, x);
  return t;
}

double NetModel::min_delay() const {
  double t = kInf;
  for (const auto* v : {&tau, &sigma, &nu_delay})
    for (double x : *v) t = std::min(t, x);
  return t;
}

void NetModel::validate() const {
  if (n == 0) throw ConfigError("model dimension n must be positive");
  require_size(c, n, "c");
  require_size(I, n, "I");
  require_size(d, n * n, "d");
  require_size(a, n * n, "a");
  require_size(b, n * n * n, "b");
  require_size(tau, n * n, "tau");
  require_size(sigma, n * n, "sigma");
  require_size(nu_delay, n * n, "nu_delay");
  require_size(f, n, "f");
  require_size(g, n, "g");
  require_size(h, n, "h");
  const std::pair<const char*, const std::vector<double>*> delays[] = {
      {"tau", &tau}, {"sigma", &sigma}, {"nu_delay", &nu_delay}};
  for (const auto& [name, values] : delays) {
    for (std::size_t k = 0; k < values->size(); ++k) {
      const double v = (*values)[k];
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError("delay " + entry_name(name, {k / n, k % n}) + " = " + format_real(v) +
                          " must be positive and finite");
    }
  }
  for (const auto* acts : {&f, &g, &h})
    for (const auto& act : *acts)
      if (act(0.0) != 0.0) throw ConfigError("activation '" + std::string(shape_name(act.shape())) + "' must vanish at 0");
  if (history.dim() != n)
    throw ConfigError("history has dimension " + std::to_string(history.dim()) + ", expected " + std::to_string(n));
}

double NetModel::evaluation_floor() const {
  double floor = -kInf;
  for (const auto* v : {&c, &I, &d, &a, &b})
    for (const auto& s : *v) floor = std::max(floor, s.domain_floor());
  return floor;
}

RhsEvaluator::RhsEvaluator(const NetModel& model) : model_(&model), n_(model.n) {
  const std::size_t n = model.n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!model.d_at(i, j).is_zero()) d_.push_back({i, j, 0, &model.d_at(i, j), 0.0, 0.0});
      if (!model.a_at(i, j).is_zero()) a_.push_back({i, j, 0, &model.a_at(i, j), model.tau_at(i, j), 0.0});
      for (std::size_t l = 0; l < n; ++l)
        if (!model.b_at(i, j, l).is_zero())
          b_.push_back({i, j, l, &model.b_at(i, j, l), model.sigma_at(i, j), model.nu_at(i, j)});
    }
  }
}

std::vector<double> rhs(const NetModel& model, double t, std::span<const double> x_now, const DelayLookup& history_at) {
  if (x_now.size() != model.n) throw ContractError("state dimension does not match the model");
  std::vector<double> out(model.n);
  RhsEvaluator(model).eval(t, x_now, history_at, out);
  return out;
}

BarBounds bar_bounds(const NetModel& model) {
  const std::size_t n = model.n;
  const double t0 = model.domain_floor;
  BarBounds bb;
  bb.n = n;
  auto bound = [t0](const SignalExpr& s, const std::string& name) {
    try {
      return sup_abs_bound(s, t0);
    } catch (const Error& e) {
      throw UnboundedError("coefficient " + name + ": " + e.what());
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    bb.I.push_back(bound(model.I[i], entry_name("I", {i})));
    for (std::size_t j = 0; j < n; ++j) {
      bb.d.push_back(bound(model.d_at(i, j), entry_name("d", {i, j})));
      bb.a.push_back(bound(model.a_at(i, j), entry_name("a", {i, j})));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) bb.b.push_back(bound(model.b_at(i, j, l), entry_name("b", {i, j, l})));
  return bb;
}

std::vector<double> c_star(const NetModel& model) {
  std::vector<double> cs;
  for (const auto& ci : model.c) cs.push_back(inf_on(ci, model.domain_floor));
  return cs;
}

M7Constants constants_m7(const NetModel& model) {
  const std::size_t n = model.n;
  const BarBounds bb = bar_bounds(model);
  const std::vector<double> cs = c_star(model);
  M7Constants k;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cs[i] > 0.0))
      throw NumericalError("(M.4) fails: inf c_" + std::to_string(i + 1) + " = " + format_real(cs[i]) + " <= 0");
    k.L = std::max(k.L, bb.I[i] / cs[i]);
    double p_row = 0.0;
    double q_row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double lin = bb.d_at(i, j) * model.f[j].lipschitz_const() + bb.a_at(i, j) * model.g[j].lipschitz_const();
      p_row += lin;
      q_row += lin;
      for (std::size_t l = 0; l < n; ++l) {
        const double bl = bb.b_at(i, j, l);
        const double first = model.h[j].lipschitz_const() * model.h[l].bound_const();
        const double second = model.h[j].bound_const() * model.h[l].lipschitz_const();
        p_row += bl * first;
        q_row += bl * (first + second);
      }
    }
    k.p1_rows.push_back(p_row / cs[i]);
    k.q1_rows.push_back(q_row / cs[i]);
  }
  k.p1 = *std::max_element(k.p1_rows.begin(), k.p1_rows.end());
  k.q1 = *std::max_element(k.q1_rows.begin(), k.q1_rows.end());
  if (k.p1 < 1.0) k.ball_radius = k.p1 * k.L / (1.0 - k.p1);
  return k;
}

double weight_lp_norm(const SignalExpr& weight, double p, const WeightedMeasure* mu) {
  if (!(p >= 1.0)) throw ContractError("L^p norm needs p >= 1");
  if (weight.is_zero()) return 0.0;
  if (weight.has_ap())
    throw NumericalError("weight '" + weight.to_string() + "' has an almost periodic part and is not in L^p");
  const double eps = 1e-12;
  double amp = 0.0;
  bool rational = false;
  for (const auto& term : weight.erg_terms()) {
    amp += std::abs(term.amplitude);
    rational = rational || term.kind == ErgKind::RationalDecay;
  }
  amp /= std::abs(weight.scale());
  const double ap = std::pow(amp, p);
  // Truncation radius so that the two discarded tails of |w|^p stay below eps.
  double T = std::max(1.0, std::log(std::max(2.0 * ap / (p * eps), 1.0)) / p);
  double tail = 0.0;
  if (rational) {
    const double needed = std::pow(2.0 * ap / ((2.0 * p - 1.0) * eps), 1.0 / (2.0 * p - 1.0));
    T = std::max(T, std::min(needed, 2000.0));
    if (needed > 2000.0) tail = 2.0 * ap * std::pow(T, 1.0 - 2.0 * p) / (2.0 * p - 1.0);
  }
  const double lo = std::isfinite(weight.domain_floor()) ? weight.domain_floor() : -T;
  const double hi = std::max(T, lo + T);
  auto integrand = [&weight, p](double t) { return std::pow(std::abs(weight.eval(t)), p); };
  double total = mu ? mu->integrate(integrand, lo, hi) : integrate(integrand, lo, hi);
  // The tail bound is only meaningful for dx; for mu it is a lower estimate.
  if (!mu) total += tail;
  return std::pow(total, 1.0 / p);
}

M5Constants constants_m5(const NetModel& model, double p, const WeightedMeasure& mu) {
  if (!(p > 1.0)) throw ContractError("constants_m5 needs p > 1");
  const std::size_t n = model.n;
  M5Constants k;
  k.p = p;
  k.q = p / (p - 1.0);
  auto norms = [&](const std::vector<ActivationSpec>& acts, const char* sym, std::vector<double>& dx,
                   std::vector<double>& dmu) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!acts[j].lipschitz_weight())
        throw ContractError("activation " + entry_name(sym, {j}) + " has no Lipschitz weight function");
      dx.push_back(weight_lp_norm(*acts[j].lipschitz_weight(), p));
      dmu.push_back(weight_lp_norm(*acts[j].lipschitz_weight(), p, &mu));
    }
  };
  norms(model.f, "f", k.norm_f, k.mu_norm_f);
  norms(model.g, "g", k.norm_g, k.mu_norm_g);
  norms(model.h, "h", k.norm_h, k.mu_norm_h);

  const BarBounds bb = bar_bounds(model);
  const std::vector<double> cs = c_star(model);
  double L = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cs[i] > 0.0))
      throw NumericalError("(M.4) fails: inf c_" + std::to_string(i + 1) + " = " + format_real(cs[i]) + " <= 0");
    L = std::max(L, bb.I[i] / cs[i]);
    double p_row = 0.0;
    double q_row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double lin = bb.d_at(i, j) * k.norm_f[j] + bb.a_at(i, j) * k.norm_g[j];
      p_row += lin;
      q_row += lin;
      for (std::size_t l = 0; l < n; ++l) {
        const double bl = bb.b_at(i, j, l);
        p_row += bl * k.norm_h[j] * model.h[l].bound_const();
        q_row += bl * (k.norm_h[j] * model.h[l].bound_const() + k.norm_h[l] * model.h[j].bound_const());
      }
    }
    const double denom = std::pow(k.q * cs[i], 1.0 / k.q);
    k.p0 = std::max(k.p0, p_row / denom);
    k.q0 = std::max(k.q0, q_row / denom);
  }
  if (k.p0 < 1.0) k.ball_radius = k.p0 * L / (1.0 - k.p0);
  return k;
}

HypothesisReport check_hypotheses(const NetModel& model, const WeightedMeasure& mu, const WeightedMeasure& nu,
                                  const HypothesisOptions& options) {
  const std::size_t n = model.n;
  HypothesisReport rep;
  rep.domain_floor = model.domain_floor;

  // (M.1) for both measures.
  {
    Verdict v;
    v.numeric = true;
    try {
      const M1Result rm = check_m1(mu, options.m1_shifts, options.m1_excluded);
      const M1Result rn = check_m1(nu, options.m1_shifts, options.m1_excluded);
      v.passed = rm.passed && rn.passed;
      v.detail = "beta(" + mu.name() + ") <= " + fmt(rm.beta_bound) + ", beta(" + nu.name() + ") <= " +
                 fmt(rn.beta_bound) + "; " + rm.detail;
    } catch (const Error& e) {
      v.detail = e.what();
    }
    rep.verdicts["M.1"] = v;
  }

  // (M.2) and membership of both measures in the infinite-mass class.
  {
    Verdict v;
    v.numeric = true;
    try {
      const M2Result r = check_m2(mu, nu, options.radii, options.m2_slope_tol);
      v.passed = r.passed;
      v.detail = "sup ratio " + fmt(r.sup_ratio) + ", log-log slope " + fmt(r.slope) + " (tolerance " +
                 fmt(options.m2_slope_tol) + ")";
    } catch (const Error& e) {
      v.detail = e.what();
    }
    rep.verdicts["M.2"] = v;

    Verdict cls;
    cls.numeric = true;
    try {
      const MeasureClassResult cm = check_measure_class(mu, options.radii);
      const MeasureClassResult cn = check_measure_class(nu, options.radii);
      cls.passed = cm.infinite_mass && cn.infinite_mass;
      cls.detail = "mass growth slope " + mu.name() + " " + fmt(cm.growth_slope) + ", " + nu.name() + " " +
                   fmt(cn.growth_slope) + " (need >= 0.5)";
    } catch (const Error& e) {
      cls.detail = e.what();
    }
    rep.verdicts["measure-class"] = cls;
  }

  // (M.3): ergodic parts of all coefficients, by remainder trend.
  {
    Verdict v;
    v.numeric = true;
    v.passed = true;
    std::size_t checked = 0;
    std::string failures;
    auto check = [&](const SignalExpr& s, const std::string& name) {
      if (!s.has_erg()) return;
      ++checked;
      try {
        const ErgodicVerdict ev =
            ergodicity_trend(decompose(s).second, mu, nu, options.z_schedule, options.ergodic_threshold);
        if (!ev.passed) {
          v.passed = false;
          failures += " " + name + "(last " + fmt(ev.remainders.back()) + ", slope " + fmt(ev.trend_slope) + ")";
        }
      } catch (const Error& e) {
        v.passed = false;
        failures += " " + name + "(" + e.what() + ")";
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      check(model.I[i], entry_name("I", {i}));
      for (std::size_t j = 0; j < n; ++j) {
        check(model.d_at(i, j), entry_name("d", {i, j}));
        check(model.a_at(i, j), entry_name("a", {i, j}));
        for (std::size_t l = 0; l < n; ++l) check(model.b_at(i, j, l), entry_name("b", {i, j, l}));
      }
    }
    v.detail = std::to_string(checked) + " ergodic part(s) checked by remainder trend";
    if (std::isfinite(model.evaluation_floor()))
      v.detail += "; one-sided e^{-t} parts integrated over [" + fmt(model.evaluation_floor()) + ", z]";
    if (!failures.empty()) v.detail += "; failing:" + failures;
    rep.verdicts["M.3"] = v;
  }

  // (M.4)
  {
    Verdict v;
    rep.c_star = c_star(model);
    v.passed = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (model.c[i].has_erg()) {
        v.passed = false;
        v.detail += "c_" + std::to_string(i + 1) + " is not almost periodic; ";
      }
      if (!(rep.c_star[i] > 0.0)) {
        v.passed = false;
        v.detail += "inf c_" + std::to_string(i + 1) + " = " + fmt(rep.c_star[i]) + " <= 0; ";
      }
    }
    if (v.passed) {
      v.detail = "c* =";
      for (double cs : rep.c_star) v.detail += " " + fmt(cs);
    }
    rep.verdicts["M.4"] = v;
  }

  bool bounds_ok = true;
  try {
    rep.bar = bar_bounds(model);
  } catch (const Error& e) {
    bounds_ok = false;
    rep.verdicts["bounds"] = Verdict{false, true, false, e.what()};
  }
  const bool m4 = rep.verdicts["M.4"].passed;

  // (M.7)/(M.8), constant Lipschitz data.
  {
    Verdict v7;
    v7.numeric = true;
    v7.passed = true;
    const std::pair<const char*, const std::vector<ActivationSpec>*> sets[] = {
        {"f", &model.f}, {"g", &model.g}, {"h", &model.h}};
    for (const auto& [sym, acts] : sets) {
      for (std::size_t j = 0; j < acts->size(); ++j) {
        const ActivationAudit au = audit_activation((*acts)[j]);
        if (!au.passed) {
          v7.passed = false;
          v7.detail += entry_name(sym, {j}) + " violates its declared constants; ";
        }
      }
    }
    if (v7.passed) v7.detail = "sampled Lipschitz quotients and bounds within declared constants";
    rep.verdicts["M.7"] = v7;

    Verdict v8;
    if (bounds_ok && m4) {
      rep.m7 = constants_m7(model);
      rep.L = rep.m7->L;
      v8.passed = rep.m7->q1 < 1.0;
      v8.detail = "q1 = " + fmt(rep.m7->q1) + ", p1 = " + fmt(rep.m7->p1) + ", L = " + fmt(rep.m7->L);
    } else {
      v8.detail = "not computed: bounds or (M.4) failed";
    }
    rep.verdicts["M.8"] = v8;
  }

  // (M.5)/(M.6), only when every activation carries a weight function.
  bool all_weights = true;
  for (const auto* acts : {&model.f, &model.g, &model.h})
    for (const auto& act : *acts) all_weights = all_weights && act.lipschitz_weight().has_value();
  {
    Verdict v5;
    Verdict v6;
    if (!all_weights) {
      v5.applicable = v6.applicable = false;
      v5.detail = v6.detail = "no Lipschitz weight functions declared";
    } else if (bounds_ok && m4) {
      try {
        rep.m5 = constants_m5(model, options.p_exponent, mu);
        v5.passed = true;
        v5.numeric = true;
        v5.detail = "weights in L^p(dx) and L^p(dmu) with p = " + fmt(options.p_exponent);
        v6.passed = rep.m5->q0 < 1.0;
        v6.detail = "q0 = " + fmt(rep.m5->q0) + ", p0 = " + fmt(rep.m5->p0);
      } catch (const Error& e) {
        v5.detail = e.what();
        v6.detail = "not computed";
      }
    } else {
      v5.detail = v6.detail = "not computed: bounds or (M.4) failed";
    }
    rep.verdicts["M.5"] = v5;
    rep.verdicts["M.6"] = v6;
  }

  const auto ok = [&rep](const char* id) { return rep.verdicts[id].passed; };
  const bool base = ok("M.1") && ok("M.2") && ok("measure-class") && ok("M.3") && ok("M.4") && bounds_ok;
  const bool v78 = ok("M.7") && ok("M.8");
  const bool v56 = all_weights && ok("M.5") && ok("M.6");
  if (v78 || !v56) {
    rep.variant = "M.7/M.8";
    if (rep.m7) rep.ball_radius = rep.m7->ball_radius;
  } else {
    rep.variant = "M.5/M.6";
    rep.ball_radius = rep.m5->ball_radius;
  }
  rep.overall_pass = base && (v78 || v56);
  return rep;
}

}  // namespace papdyn
