#include "papdyn/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "papdyn/error.hpp"

namespace papdyn {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) fail(join(path, key), "missing field");
  return *v;
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double as_positive(const json& v, const std::string& path) {
  const double x = as_real(v, path);
  if (!(x > 0.0) || !std::isfinite(x)) fail(path, "must be positive");
  return x;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::vector<double> as_reals(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_real(v[k], index(path, k)));
  return out;
}

const json& as_array(const json& v, const std::string& path, std::size_t size) {
  if (!v.is_array()) fail(path, "expected an array of length " + std::to_string(size));
  if (v.size() != size)
    fail(path, "dimension mismatch: expected " + std::to_string(size) + " entries, found " + std::to_string(v.size()));
  return v;
}

SignalExpr as_signal(const json& v, const std::string& path, double exp_floor) {
  try {
    if (v.is_number()) return SignalExpr::parse(format_real(v.get<double>()), exp_floor);
    if (v.is_string()) return SignalExpr::parse(v.get<std::string>(), exp_floor);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  fail(path, "expected an expression string or a number");
}

Expr as_expr(const json& v, const std::string& path) {
  try {
    if (v.is_number()) return Expr::parse(format_real(v.get<double>()));
    if (v.is_string()) return Expr::parse(v.get<std::string>());
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  fail(path, "expected an expression string or a number");
}

std::vector<SignalExpr> signal_vector(const json& v, const std::string& path, std::size_t n, double floor) {
  as_array(v, path, n);
  std::vector<SignalExpr> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(as_signal(v[i], index(path, i), floor));
  return out;
}

std::vector<SignalExpr> signal_matrix(const json& v, const std::string& path, std::size_t n, double floor) {
  as_array(v, path, n);
  std::vector<SignalExpr> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = index(path, i);
    as_array(v[i], row, n);
    for (std::size_t j = 0; j < n; ++j) out.push_back(as_signal(v[i][j], index(row, j), floor));
  }
  return out;
}

std::vector<SignalExpr> signal_tensor(const json& v, const std::string& path, std::size_t n, double floor) {
  as_array(v, path, n);
  std::vector<SignalExpr> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string pi = index(path, i);
    as_array(v[i], pi, n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::string pj = index(pi, j);
      as_array(v[i][j], pj, n);
      for (std::size_t l = 0; l < n; ++l) out.push_back(as_signal(v[i][j][l], index(pj, l), floor));
    }
  }
  return out;
}

std::vector<double> delay_matrix(const json& v, const std::string& path, std::size_t n) {
  if (v.is_number()) return std::vector<double>(n * n, as_real(v, path));
  as_array(v, path, n);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = index(path, i);
    as_array(v[i], row, n);
    for (std::size_t j = 0; j < n; ++j) out.push_back(as_real(v[i][j], index(row, j)));
  }
  return out;
}

ActivationSpec activation(const json& v, const std::string& path, double exp_floor) {
  try {
    if (v.is_string()) {
      const ActivationShape shape = shape_from_name(v.get<std::string>());
      if (shape == ActivationShape::Table) fail(path, "custom_table needs a table");
      if (shape == ActivationShape::Tanh) return ActivationSpec::tanh();
      if (shape == ActivationShape::Saturation) return ActivationSpec::saturation();
      return ActivationSpec::sine();
    }
    if (!v.is_object()) fail(path, "expected a shape name or an activation object");
    const json& shape_v = require(v, path, "shape");
    if (!shape_v.is_string()) fail(join(path, "shape"), "expected a string");
    ActivationSpec act;
    switch (shape_from_name(shape_v.get<std::string>())) {
      case ActivationShape::Sine: act = ActivationSpec::sine(); break;
      case ActivationShape::Tanh: act = ActivationSpec::tanh(); break;
      case ActivationShape::Saturation: act = ActivationSpec::saturation(); break;
      case ActivationShape::Table: {
        const std::string tp = join(path, "table");
        const json& table = require(v, path, "table");
        act = ActivationSpec::table(as_reals(require(table, tp, "x"), join(tp, "x")),
                                    as_reals(require(table, tp, "y"), join(tp, "y")));
        break;
      }
    }
    const json* lip = find(v, "lipschitz");
    const json* bound = find(v, "bound");
    if (lip || bound) {
      act = act.with_constants(lip ? as_real(*lip, join(path, "lipschitz")) : act.lipschitz_const(),
                               bound ? as_real(*bound, join(path, "bound")) : act.bound_const());
    }
    if (const json* w = find(v, "weight")) act = act.with_weight(as_signal(*w, join(path, "weight"), exp_floor));
    return act;
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    fail(path, msg);
  }
}

std::vector<ActivationSpec> activations(const json* v, const std::string& path, std::size_t n, double exp_floor) {
  if (!v) return std::vector<ActivationSpec>(n, ActivationSpec::sine());
  if (!v->is_array()) return std::vector<ActivationSpec>(n, activation(*v, path, exp_floor));
  as_array(*v, path, n);
  std::vector<ActivationSpec> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(activation((*v)[j], index(path, j), exp_floor));
  return out;
}

History history(const json* v, const std::string& path, std::size_t n) {
  if (!v) return History::constant(std::vector<double>(n, 0.0));
  if (v->is_number()) return History::constant(std::vector<double>(n, as_real(*v, path)));
  if (v->is_array()) {
    as_array(*v, path, n);
    return History::constant(as_reals(*v, path));
  }
  if (!v->is_object()) fail(path, "expected a history object");
  const json& kind = require(*v, path, "kind");
  if (kind == "constant") {
    const std::string vp = join(path, "value");
    const json& value = require(*v, path, "value");
    if (value.is_number()) return History::constant(std::vector<double>(n, as_real(value, vp)));
    as_array(value, vp, n);
    return History::constant(as_reals(value, vp));
  }
  if (kind == "expressions") {
    const std::string cp = join(path, "components");
    const json& comps = as_array(require(*v, path, "components"), cp, n);
    std::vector<Expr> exprs;
    for (std::size_t i = 0; i < n; ++i) exprs.push_back(as_expr(comps[i], index(cp, i)));
    return History::expressions(std::move(exprs));
  }
  fail(join(path, "kind"), "expected \"constant\" or \"expressions\"");
}

WeightedMeasure measure(const json* v, const std::string& path) {
  if (!v) return WeightedMeasure::lebesgue();
  if (v->is_string()) {
    if (*v == "lebesgue") return WeightedMeasure::lebesgue();
    fail(path, "unknown measure name");
  }
  if (!v->is_object()) fail(path, "expected a measure object");
  std::string name = "measure";
  if (const json* nm = find(*v, "name")) {
    if (!nm->is_string()) fail(join(path, "name"), "expected a string");
    name = nm->get<std::string>();
  }
  if (const json* d = find(*v, "density")) return WeightedMeasure::from_density(name, as_expr(*d, join(path, "density")));
  const json* left = find(*v, "left");
  const json* right = find(*v, "right");
  if (!left || !right) fail(path, "expected \"density\" or both \"left\" and \"right\"");
  return WeightedMeasure::two_piece(name, as_expr(*left, join(path, "left")), as_expr(*right, join(path, "right")));
}

void read_settings(const json& s, const std::string& path, Settings& out) {
  if (!s.is_object()) fail(path, "expected an object");
  for (auto it = s.begin(); it != s.end(); ++it) {
    const std::string& key = it.key();
    const std::string p = join(path, key);
    const json& v = it.value();
    if (key == "step") out.step = as_positive(v, p);
    else if (key == "picard_step") out.picard_step = as_positive(v, p);
    else if (key == "tol") out.tol = as_positive(v, p);
    else if (key == "eps_tail") out.eps_tail = as_positive(v, p);
    else if (key == "max_iter") {
      out.max_iter = as_int(v, p);
      if (out.max_iter <= 0) fail(p, "must be positive");
    } else if (key == "picard_window") {
      std::vector<double> w = as_reals(v, p);
      if (w.size() != 2 || !(w[0] < w[1])) fail(p, "expected [lo, hi] with lo < hi");
      out.picard_lo = w[0];
      out.picard_hi = w[1];
    } else if (key == "t_end") out.t_end = as_positive(v, p);
    else if (key == "horizon") out.horizon = as_positive(v, p);
    else if (key == "safety") {
      out.safety = as_positive(v, p);
      if (out.safety >= 1.0) fail(p, "must lie in (0, 1)");
    } else if (key == "stability_mode") {
      if (v == "pairs") out.stability_mode = StabilityMode::Pairs;
      else if (v == "picard") out.stability_mode = StabilityMode::Picard;
      else fail(p, "expected \"pairs\" or \"picard\"");
    } else if (key == "pairs") {
      out.pairs = as_int(v, p);
      if (out.pairs <= 0) fail(p, "must be positive");
    } else if (key == "seed") {
      const int seed = as_int(v, p);
      if (seed < 0) fail(p, "must be non-negative");
      out.seed = static_cast<unsigned>(seed);
    } else if (key == "amplitude") out.amplitude = as_positive(v, p);
    else if (key == "z_schedule") {
      out.z_schedule = as_reals(v, p);
      if (out.z_schedule.size() < 2) fail(p, "needs at least two values");
      for (std::size_t k = 0; k < out.z_schedule.size(); ++k)
        if (!(out.z_schedule[k] > 0) || (k && !(out.z_schedule[k] > out.z_schedule[k - 1])))
          fail(p, "must be positive and increasing");
    } else if (key == "ergodic_threshold") out.ergodic_threshold = as_positive(v, p);
    else if (key == "m1_shifts") out.m1_shifts = as_reals(v, p);
    else if (key == "m1_excluded") {
      std::vector<double> w = as_reals(v, p);
      if (w.size() != 2 || w[0] > w[1]) fail(p, "expected [lo, hi] with lo <= hi");
      out.m1_excluded_lo = w[0];
      out.m1_excluded_hi = w[1];
    } else if (key == "radii") {
      out.radii = as_reals(v, p);
      if (out.radii.size() < 2) fail(p, "needs at least two values");
      for (double r : out.radii)
        if (!(r > 0)) fail(p, "must be positive");
    } else if (key == "m2_slope_tol") out.m2_slope_tol = as_positive(v, p);
    else if (key == "p") {
      out.p_exponent = as_real(v, p);
      if (!(out.p_exponent > 1.0)) fail(p, "must exceed 1");
    } else fail(p, "unknown setting");
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

HypothesisOptions RunConfig::hypothesis_options() const {
  HypothesisOptions o;
  o.z_schedule = settings.z_schedule;
  o.ergodic_threshold = settings.ergodic_threshold;
  o.m1_shifts = settings.m1_shifts;
  o.m1_excluded = {settings.m1_excluded_lo, settings.m1_excluded_hi};
  o.radii = settings.radii;
  o.m2_slope_tol = settings.m2_slope_tol;
  o.p_exponent = settings.p_exponent;
  return o;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // byte is one past the offending character
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    const auto colon = msg.find(": ", msg.find("parse error"));
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      (colon == std::string::npos ? msg : msg.substr(colon + 2)));
  }
  if (!doc.is_object()) fail("<root>", "expected an object");

  RunConfig cfg;
  if (const json* nm = find(doc, "name")) {
    if (!nm->is_string()) fail("name", "expected a string");
    cfg.name = nm->get<std::string>();
  }

  const json& m = require(doc, "", "model");
  if (!m.is_object()) fail("model", "expected an object");
  const json& nv = require(m, "model", "n");
  const int n_int = as_int(nv, "model.n");
  if (n_int <= 0) fail("model.n", "must be a positive integer");
  const std::size_t n = static_cast<std::size_t>(n_int);

  if (const json* ef = find(m, "exp_floor")) cfg.exp_floor = as_real(*ef, "model.exp_floor");
  const double fl = cfg.exp_floor;

  NetModel model = NetModel::zeros(n);
  if (const json* df = find(m, "domain_floor")) model.domain_floor = as_real(*df, "model.domain_floor");
  else model.domain_floor = fl;
  model.c = signal_vector(require(m, "model", "c"), "model.c", n, fl);
  if (const json* v = find(m, "I")) model.I = signal_vector(*v, "model.I", n, fl);
  if (const json* v = find(m, "d")) model.d = signal_matrix(*v, "model.d", n, fl);
  if (const json* v = find(m, "a")) model.a = signal_matrix(*v, "model.a", n, fl);
  if (const json* v = find(m, "b")) model.b = signal_tensor(*v, "model.b", n, fl);
  if (const json* v = find(m, "tau")) model.tau = delay_matrix(*v, "model.tau", n);
  if (const json* v = find(m, "sigma")) model.sigma = delay_matrix(*v, "model.sigma", n);
  if (const json* v = find(m, "nu_delay")) model.nu_delay = delay_matrix(*v, "model.nu_delay", n);
  model.f = activations(find(m, "f"), "model.f", n, fl);
  model.g = activations(find(m, "g"), "model.g", n, fl);
  model.h = activations(find(m, "h"), "model.h", n, fl);
  model.history = history(find(m, "history"), "model.history", n);
  for (auto it = m.begin(); it != m.end(); ++it) {
    static const char* known[] = {"n", "exp_floor", "domain_floor", "c", "I", "d", "a", "b", "tau",
                                  "sigma", "nu_delay", "f", "g", "h", "history"};
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail("model." + it.key(), "unknown field");
  }
  try {
    model.validate();
  } catch (const ConfigError& e) {
    fail("model", e.what());
  }
  cfg.model = std::move(model);

  if (const json* ms = find(doc, "measures")) {
    if (!ms->is_object()) fail("measures", "expected an object");
    cfg.mu = measure(find(*ms, "mu"), "measures.mu");
    cfg.nu = measure(find(*ms, "nu"), "measures.nu");
  } else {
    cfg.mu = WeightedMeasure::lebesgue();
    cfg.nu = WeightedMeasure::lebesgue();
  }

  if (const json* s = find(doc, "settings")) read_settings(*s, "settings", cfg.settings);

  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "name" && it.key() != "model" && it.key() != "measures" && it.key() != "settings")
      fail(it.key(), "unknown field");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

ordered_json activation_json(const ActivationSpec& a) {
  ordered_json o;
  o["shape"] = std::string(shape_name(a.shape()));
  if (a.shape() == ActivationShape::Table) o["table"] = {{"x", a.table_x()}, {"y", a.table_y()}};
  o["lipschitz"] = a.lipschitz_const();
  o["bound"] = a.bound_const();
  if (a.lipschitz_weight()) o["weight"] = a.lipschitz_weight()->to_string();
  return o;
}

ordered_json measure_json(const WeightedMeasure& m) {
  ordered_json o;
  o["name"] = m.name();
  if (m.is_two_piece()) {
    o["left"] = m.pieces()[0].density.text();
    o["right"] = m.pieces()[1].density.text();
  } else {
    o["density"] = m.pieces()[0].density.text();
  }
  return o;
}

}  // namespace

std::string emit_config(const RunConfig& cfg) {
  const NetModel& m = cfg.model;
  const std::size_t n = m.n;
  ordered_json doc;
  doc["name"] = cfg.name;

  ordered_json model;
  model["n"] = n;
  model["exp_floor"] = cfg.exp_floor;
  model["domain_floor"] = m.domain_floor;
  auto vec = [&](const std::vector<SignalExpr>& v) {
    ordered_json a = ordered_json::array();
    for (const SignalExpr& s : v) a.push_back(s.to_string());
    return a;
  };
  auto mat = [&](const std::vector<SignalExpr>& v) {
    ordered_json a = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t j = 0; j < n; ++j) row.push_back(v[i * n + j].to_string());
      a.push_back(row);
    }
    return a;
  };
  auto delays = [&](const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t j = 0; j < n; ++j) row.push_back(v[i * n + j]);
      a.push_back(row);
    }
    return a;
  };
  auto acts = [&](const std::vector<ActivationSpec>& v) {
    ordered_json a = ordered_json::array();
    for (const ActivationSpec& s : v) a.push_back(activation_json(s));
    return a;
  };
  model["c"] = vec(m.c);
  model["I"] = vec(m.I);
  model["d"] = mat(m.d);
  model["a"] = mat(m.a);
  ordered_json b = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    ordered_json bi = ordered_json::array();
    for (std::size_t j = 0; j < n; ++j) {
      ordered_json bij = ordered_json::array();
      for (std::size_t l = 0; l < n; ++l) bij.push_back(m.b_at(i, j, l).to_string());
      bi.push_back(bij);
    }
    b.push_back(bi);
  }
  model["b"] = b;
  model["tau"] = delays(m.tau);
  model["sigma"] = delays(m.sigma);
  model["nu_delay"] = delays(m.nu_delay);
  model["f"] = acts(m.f);
  model["g"] = acts(m.g);
  model["h"] = acts(m.h);
  ordered_json hist;
  switch (m.history.kind()) {
    case History::Kind::Constant:
      hist["kind"] = "constant";
      hist["value"] = m.history.constant_values();
      break;
    case History::Kind::Expressions: {
      hist["kind"] = "expressions";
      ordered_json comps = ordered_json::array();
      for (const Expr& e : m.history.components()) comps.push_back(e.text());
      hist["components"] = comps;
      break;
    }
    default:
      throw ConfigError("model.history: only constant and expression histories can be written to a config");
  }
  model["history"] = hist;
  doc["model"] = model;

  doc["measures"] = {{"mu", measure_json(cfg.mu)}, {"nu", measure_json(cfg.nu)}};

  const Settings& s = cfg.settings;
  ordered_json st;
  st["step"] = s.step;
  st["picard_step"] = s.picard_step;
  st["tol"] = s.tol;
  st["eps_tail"] = s.eps_tail;
  st["max_iter"] = s.max_iter;
  st["picard_window"] = {s.picard_lo, s.picard_hi};
  st["t_end"] = s.t_end;
  st["horizon"] = s.horizon;
  st["safety"] = s.safety;
  st["stability_mode"] = s.stability_mode == StabilityMode::Pairs ? "pairs" : "picard";
  st["pairs"] = s.pairs;
  st["seed"] = s.seed;
  st["amplitude"] = s.amplitude;
  st["z_schedule"] = s.z_schedule;
  st["ergodic_threshold"] = s.ergodic_threshold;
  st["m1_shifts"] = s.m1_shifts;
  st["m1_excluded"] = {s.m1_excluded_lo, s.m1_excluded_hi};
  st["radii"] = s.radii;
  st["m2_slope_tol"] = s.m2_slope_tol;
  st["p"] = s.p_exponent;
  doc["settings"] = st;
  return doc.dump(2) + "\n";
}

}  // namespace papdyn
