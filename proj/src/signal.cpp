#include "papdyn/signal.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "papdyn/error.hpp"

namespace papdyn {

namespace {

// Intermediate values while normalizing a parse tree into a SignalExpr.
// Poly is a polynomial in t of degree <= 2 (enough for `t*t` inside
// 1/(1+t*t) and affine trig arguments); Form is a linear combination of
// basis terms; AbsT is k*|t|, only legal as an exp() argument.
struct Poly {
  double c[3] = {0.0, 0.0, 0.0};

  int degree() const {
    if (c[2] != 0.0) return 2;
    if (c[1] != 0.0) return 1;
    return 0;
  }
};

struct Form {
  std::vector<ApTerm> ap;
  std::vector<ErgTerm> erg;
};

struct AbsT {
  double k = 1.0;
};

using Value = std::variant<Poly, Form, AbsT>;

[[noreturn]] void reject(const Expr& source, const std::string& why) {
  throw ConfigError("expression '" + source.text() + "' is outside the supported signal shape: " + why);
}

Form to_form(const Value& v, const Expr& src) {
  if (const auto* f = std::get_if<Form>(&v)) return *f;
  if (const auto* p = std::get_if<Poly>(&v)) {
    if (p->degree() > 0) reject(src, "polynomial growth in t");
    Form f;
    if (p->c[0] != 0.0) f.ap.push_back({p->c[0], ApKind::Const, 0.0, 0.0});
    return f;
  }
  reject(src, "abs(t) is only allowed as exp(-abs(t))");
}

Value scale_value(const Value& v, double k) {
  if (const auto* p = std::get_if<Poly>(&v)) {
    Poly r = *p;
    for (double& c : r.c) c *= k;
    return r;
  }
  if (const auto* a = std::get_if<AbsT>(&v)) return AbsT{a->k * k};
  Form f = std::get<Form>(v);
  for (auto& term : f.ap) term.amplitude *= k;
  for (auto& term : f.erg) term.amplitude *= k;
  return f;
}

const Poly* as_constant(const Value& v) {
  const auto* p = std::get_if<Poly>(&v);
  return (p && p->degree() == 0) ? p : nullptr;
}

Value normalize(const Expr::Node& n, const Expr& src) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::Number: {
      Poly p;
      p.c[0] = n.value;
      return p;
    }
    case Op::Var: {
      Poly p;
      p.c[1] = 1.0;
      return p;
    }
    case Op::Neg:
      return scale_value(normalize(*n.lhs, src), -1.0);
    case Op::Add:
    case Op::Sub: {
      Value lhs = normalize(*n.lhs, src);
      Value rhs = normalize(*n.rhs, src);
      if (n.op == Op::Sub) rhs = scale_value(rhs, -1.0);
      const auto* pl = std::get_if<Poly>(&lhs);
      const auto* pr = std::get_if<Poly>(&rhs);
      if (pl && pr) {
        Poly r;
        for (int k = 0; k < 3; ++k) r.c[k] = pl->c[k] + pr->c[k];
        return r;
      }
      Form fl = to_form(lhs, src);
      Form fr = to_form(rhs, src);
      fl.ap.insert(fl.ap.end(), fr.ap.begin(), fr.ap.end());
      fl.erg.insert(fl.erg.end(), fr.erg.begin(), fr.erg.end());
      return fl;
    }
    case Op::Mul: {
      Value lhs = normalize(*n.lhs, src);
      Value rhs = normalize(*n.rhs, src);
      if (const Poly* k = as_constant(lhs)) return scale_value(rhs, k->c[0]);
      if (const Poly* k = as_constant(rhs)) return scale_value(lhs, k->c[0]);
      const auto* pl = std::get_if<Poly>(&lhs);
      const auto* pr = std::get_if<Poly>(&rhs);
      if (pl && pr && pl->degree() + pr->degree() <= 2) {
        Poly r;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; i + j < 3; ++j) r.c[i + j] += pl->c[i] * pr->c[j];
        return r;
      }
      reject(src, "product of two time-varying factors");
    }
    case Op::Div: {
      Value num = normalize(*n.lhs, src);
      Value den = normalize(*n.rhs, src);
      if (const Poly* k = as_constant(den)) {
        if (k->c[0] == 0.0) reject(src, "division by zero");
        return scale_value(num, 1.0 / k->c[0]);
      }
      const auto* pd = std::get_if<Poly>(&den);
      const Poly* kn = as_constant(num);
      if (pd && kn && pd->c[1] == 0.0 && pd->c[0] != 0.0 && pd->c[2] == pd->c[0]) {
        Form f;
        f.erg.push_back({kn->c[0] / pd->c[0], ErgKind::RationalDecay});
        return f;
      }
      reject(src, "only division by a constant or by a multiple of (1+t*t) is supported");
    }
    case Op::Sin:
    case Op::Cos: {
      Value arg = normalize(*n.lhs, src);
      const auto* p = std::get_if<Poly>(&arg);
      if (!p || p->degree() > 1) reject(src, "trigonometric argument must be affine in t");
      if (p->degree() == 0) {
        Poly r;
        r.c[0] = n.op == Op::Sin ? std::sin(p->c[0]) : std::cos(p->c[0]);
        return r;
      }
      Form f;
      f.ap.push_back({1.0, n.op == Op::Sin ? ApKind::Sin : ApKind::Cos, p->c[1], p->c[0]});
      return f;
    }
    case Op::Exp: {
      Value arg = normalize(*n.lhs, src);
      if (const Poly* k = as_constant(arg)) {
        Poly r;
        r.c[0] = std::exp(k->c[0]);
        return r;
      }
      if (const auto* p = std::get_if<Poly>(&arg); p && p->degree() == 1 && p->c[0] == 0.0 && p->c[1] == -1.0) {
        Form f;
        f.erg.push_back({1.0, ErgKind::ExpDecay});
        return f;
      }
      if (const auto* a = std::get_if<AbsT>(&arg); a && a->k == -1.0) {
        Form f;
        f.erg.push_back({1.0, ErgKind::ExpAbsDecay});
        return f;
      }
      reject(src, "exp() argument must be a constant, -t or -abs(t)");
    }
    case Op::Abs: {
      Value arg = normalize(*n.lhs, src);
      if (const Poly* k = as_constant(arg)) {
        Poly r;
        r.c[0] = std::abs(k->c[0]);
        return r;
      }
      if (const auto* p = std::get_if<Poly>(&arg); p && p->degree() == 1 && p->c[0] == 0.0 && p->c[1] > 0.0)
        return AbsT{p->c[1]};
      reject(src, "abs() argument must be a constant or a positive multiple of t");
    }
    case Op::Sqrt: {
      Value arg = normalize(*n.lhs, src);
      const Poly* k = as_constant(arg);
      if (!k) reject(src, "sqrt() argument must be constant");
      Poly r;
      r.c[0] = std::sqrt(k->c[0]);
      return r;
    }
  }
  reject(src, "unsupported node");
}

double ap_value(const ApTerm& term, double t) {
  switch (term.kind) {
    case ApKind::Const:
      return term.amplitude;
    case ApKind::Sin:
      return term.amplitude * std::sin(term.frequency * t + term.phase);
    case ApKind::Cos:
      return term.amplitude * std::cos(term.frequency * t + term.phase);
  }
  return 0.0;
}

bool has_one_sided(const std::vector<ErgTerm>& erg) {
  return std::any_of(erg.begin(), erg.end(), [](const ErgTerm& e) { return e.kind == ErgKind::ExpDecay; });
}

void check_bound_domain(const SignalExpr& expr, double t0) {
  if (!has_one_sided(expr.erg_terms())) return;
  if (std::isinf(t0) && t0 < 0) throw UnboundedError("e^{-t} term is unbounded on a domain extending to -inf");
  if (t0 < expr.exp_floor())
    throw DomainError("bound requested from t0 = " + format_real(t0) + " below the signal floor " +
                      format_real(expr.exp_floor()));
}

}  // namespace

SignalExpr::SignalExpr(std::vector<ApTerm> ap, std::vector<ErgTerm> erg, double scale, double exp_floor)
    : ap_(std::move(ap)), erg_(std::move(erg)), scale_(scale), exp_floor_(exp_floor) {
  if (scale_ == 0.0 || !std::isfinite(scale_)) throw ConfigError("signal scale must be finite and nonzero");
}

SignalExpr SignalExpr::parse(std::string_view text, double exp_floor) {
  return from_expr(Expr::parse(text), exp_floor);
}

SignalExpr SignalExpr::from_expr(const Expr& expr, double exp_floor) {
  if (expr.empty()) return SignalExpr({}, {}, 1.0, exp_floor);
  const Expr::Node& root = *expr.root();
  double scale = 1.0;
  const Expr::Node* body = &root;
  // Keep a top-level constant divisor as the scale, e.g. (2*sin(t)+exp(-t))/10.
  if (root.op == Expr::Op::Div) {
    Value den = normalize(*root.rhs, expr);
    if (const Poly* k = as_constant(den); k && k->c[0] != 0.0) {
      scale = k->c[0];
      body = root.lhs.get();
    }
  }
  Form f = to_form(normalize(*body, expr), expr);
  // Constants are merged into one leading term so the text form is canonical.
  double constant = 0.0;
  for (const auto& term : f.ap)
    if (term.kind == ApKind::Const) constant += term.amplitude;
  std::erase_if(f.ap, [](const ApTerm& term) { return term.kind == ApKind::Const; });
  if (constant != 0.0) f.ap.insert(f.ap.begin(), {constant, ApKind::Const, 0.0, 0.0});
  return SignalExpr(std::move(f.ap), std::move(f.erg), scale, exp_floor);
}

SignalExpr SignalExpr::constant(double value) {
  std::vector<ApTerm> ap;
  if (value != 0.0) ap.push_back({value, ApKind::Const, 0.0, 0.0});
  return SignalExpr(std::move(ap), {});
}

double SignalExpr::domain_floor() const { return has_one_sided(erg_) ? exp_floor_ : -kInf; }

double SignalExpr::eval(double t) const {
  double sum = 0.0;
  for (const auto& term : ap_) sum += ap_value(term, t);
  for (const auto& term : erg_) {
    if (term.kind == ErgKind::ExpDecay && t < exp_floor_)
      throw DomainError("signal '" + to_string() + "' evaluated at t = " + format_real(t) + " below its floor " +
                        format_real(exp_floor_));
    sum += term.amplitude * erg_kernel(term.kind, t);
  }
  return sum / scale_;
}

std::string SignalExpr::to_string() const {
  if (is_zero()) return "0";
  std::string body;
  auto append = [&body](const std::string& piece) {
    if (!body.empty()) body += " + ";
    body += piece;
  };
  for (const auto& term : ap_) {
    const std::string amp = format_real(term.amplitude);
    switch (term.kind) {
      case ApKind::Const:
        append("(" + amp + ")");
        break;
      case ApKind::Sin:
      case ApKind::Cos:
        append("(" + amp + ")*" + (term.kind == ApKind::Sin ? "sin(" : "cos(") + "(" +
               format_real(term.frequency) + ")*t + (" + format_real(term.phase) + "))");
        break;
    }
  }
  for (const auto& term : erg_) {
    const std::string amp = "(" + format_real(term.amplitude) + ")";
    switch (term.kind) {
      case ErgKind::ExpDecay:
        append(amp + "*exp(-t)");
        break;
      case ErgKind::ExpAbsDecay:
        append(amp + "*exp(-abs(t))");
        break;
      case ErgKind::RationalDecay:
        append(amp + "/(1 + t*t)");
        break;
    }
  }
  if (scale_ == 1.0) return body;
  return "(" + body + ")/(" + format_real(scale_) + ")";
}

SignalExpr SignalExpr::scaled(double factor) const {
  SignalExpr r = *this;
  for (auto& term : r.ap_) term.amplitude *= factor;
  for (auto& term : r.erg_) term.amplitude *= factor;
  return r;
}

double erg_kernel(ErgKind kind, double t) {
  switch (kind) {
    case ErgKind::ExpDecay:
      return std::exp(-t);
    case ErgKind::ExpAbsDecay:
      return std::exp(-std::abs(t));
    case ErgKind::RationalDecay:
      return 1.0 / (1.0 + t * t);
  }
  return 0.0;
}

double erg_kernel_sup(ErgKind kind, double t0) {
  switch (kind) {
    case ErgKind::ExpDecay:
      if (std::isinf(t0) && t0 < 0) return kInf;
      return std::exp(-t0);
    case ErgKind::ExpAbsDecay:
      return t0 <= 0.0 ? 1.0 : std::exp(-t0);
    case ErgKind::RationalDecay:
      return t0 <= 0.0 ? 1.0 : 1.0 / (1.0 + t0 * t0);
  }
  return 0.0;
}

double sup_abs_bound(const SignalExpr& expr, double t0) {
  check_bound_domain(expr, t0);
  double sum = 0.0;
  for (const auto& term : expr.ap_terms()) sum += std::abs(term.amplitude);
  for (const auto& term : expr.erg_terms()) sum += std::abs(term.amplitude) * erg_kernel_sup(term.kind, t0);
  return sum / std::abs(expr.scale());
}

double inf_on(const SignalExpr& expr, double t0) {
  check_bound_domain(expr, t0);
  const double s = expr.scale();
  double lower = 0.0;
  for (const auto& term : expr.ap_terms()) {
    const double a = term.amplitude / s;
    lower += term.kind == ApKind::Const ? a : -std::abs(a);
  }
  // Decay kernels are positive and tend to 0, so a term contributes at
  // worst min(0, a) * sup k.
  for (const auto& term : expr.erg_terms()) {
    const double a = term.amplitude / s;
    if (a < 0.0) lower += a * erg_kernel_sup(term.kind, t0);
  }
  return lower;
}

RefinedBound sup_abs_refined(const SignalExpr& expr, double t0, double span, std::size_t samples) {
  RefinedBound r;
  r.bound = sup_abs_bound(expr, t0);
  const double lo = std::isinf(t0) ? -span / 2 : t0;
  const double h = span / static_cast<double>(std::max<std::size_t>(samples - 1, 1));
  for (std::size_t k = 0; k < samples; ++k)
    r.sampled = std::max(r.sampled, std::abs(expr.eval(lo + static_cast<double>(k) * h)));
  return r;
}

RefinedBound inf_refined(const SignalExpr& expr, double t0, double span, std::size_t samples) {
  RefinedBound r;
  r.bound = inf_on(expr, t0);
  r.sampled = kInf;
  const double lo = std::isinf(t0) ? -span / 2 : t0;
  const double h = span / static_cast<double>(std::max<std::size_t>(samples - 1, 1));
  for (std::size_t k = 0; k < samples; ++k) r.sampled = std::min(r.sampled, expr.eval(lo + static_cast<double>(k) * h));
  return r;
}

std::pair<SignalExpr, SignalExpr> decompose(const SignalExpr& expr) {
  return {SignalExpr(expr.ap_terms(), {}, expr.scale(), expr.exp_floor()),
          SignalExpr({}, expr.erg_terms(), expr.scale(), expr.exp_floor())};
}

}  // namespace papdyn
