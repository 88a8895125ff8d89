#include "papdyn/fixedpoint.hpp"

#include <algorithm>
#include <cmath>

#include "papdyn/error.hpp"

namespace papdyn {

CandidateFunction::CandidateFunction(double t_lo, double step, std::size_t dim, std::vector<double> values)
    : table_(t_lo, step, dim, std::move(values)) {}

double CandidateFunction::value(double t, std::size_t c) const {
  if (t <= t_lo()) return table_.at(0, c);
  return table_.sample(t, c);
}

double CandidateFunction::sup_norm(double from) const {
  double sup = 0.0;
  for (std::size_t k = 0; k < nodes(); ++k) {
    if (time(k) < from - 1e-9) continue;
    for (std::size_t c = 0; c < dim(); ++c) sup = std::max(sup, std::abs(at(k, c)));
  }
  return sup;
}

double sup_distance(const CandidateFunction& a, const CandidateFunction& b, double from) {
  if (a.nodes() != b.nodes() || a.dim() != b.dim() || a.t_lo() != b.t_lo() || a.step() != b.step())
    throw ContractError("candidate functions live on different grids");
  double sup = 0.0;
  for (std::size_t k = 0; k < a.nodes(); ++k) {
    if (a.time(k) < from - 1e-9) continue;
    for (std::size_t c = 0; c < a.dim(); ++c) sup = std::max(sup, std::abs(a.at(k, c) - b.at(k, c)));
  }
  return sup;
}

namespace {

constexpr std::size_t kRefine = 4;

// Fine-grid shift for a delay, or -1 when the delay is not a multiple of the
// fine step.
long fine_shift(double delay, double delta) {
  const double k = delay / delta;
  const double r = std::round(k);
  return std::abs(k - r) < 1e-9 ? static_cast<long>(r) : -1;
}

}  // namespace

GammaOperator::GammaOperator(const NetModel& model, const PicardOptions& options)
    : model_(&model), n_(model.n), step_(options.step) {
  model.validate();
  if (!(options.step > 0.0) || !(options.t_hi > options.t_lo)) throw ContractError("invalid Picard window or step");
  if (!(options.eps_tail > 0.0)) throw ContractError("eps_tail must be positive");

  const double floor = model.evaluation_floor();
  const std::size_t n = n_;

  // Uniform bound of |F_i| and the resulting truncation window.
  std::vector<double> cs(n);
  double window = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cs[i] = inf_on(model.c[i], floor);
    if (!(cs[i] > 0.0))
      throw NumericalError("(M.4) fails: inf c_" + std::to_string(i + 1) + " = " + format_real(cs[i]) + " <= 0");
    double bound = sup_abs_bound(model.I[i], floor);
    for (std::size_t j = 0; j < n; ++j) {
      bound += sup_abs_bound(model.d_at(i, j), floor) * model.f[j].bound_const();
      bound += sup_abs_bound(model.a_at(i, j), floor) * model.g[j].bound_const();
      for (std::size_t l = 0; l < n; ++l)
        bound += sup_abs_bound(model.b_at(i, j, l), floor) * model.h[j].bound_const() * model.h[l].bound_const();
    }
    if (bound > 0.0) window = std::max(window, std::log(bound / (cs[i] * options.eps_tail)) / cs[i]);
  }
  window = std::max(window, 0.0);
  // Align the truncation window with the candidate grid.
  const double cells = std::ceil(window / step_ - 1e-9);
  window_ = cells * step_;

  t_lo_ = options.t_lo;
  t_hi_ = options.t_hi;
  if (t_lo_ - window_ < floor) {
    shift_ = floor + window_ - t_lo_;
    t_lo_ = floor + window_;
    t_hi_ += shift_;
  }
  nodes_ = static_cast<std::size_t>(std::llround((t_hi_ - t_lo_) / step_)) + 1;
  t_hi_ = t_lo_ + step_ * static_cast<double>(nodes_ - 1);

  delta_ = step_ / kRefine;
  node_offset_ = static_cast<std::size_t>(cells) * kRefine;
  s_start_ = shift_ > 0.0 ? floor : t_lo_ - window_;
  fine_ = node_offset_ + (nodes_ - 1) * kRefine + 1;

  auto s_at = [this](std::size_t m) { return s_start_ + delta_ * static_cast<double>(m); };

  decay_.resize(fine_ * n);
  input_.resize(fine_ * n);
  for (std::size_t m = 0; m < fine_; ++m) {
    const double s = s_at(m);
    for (std::size_t i = 0; i < n; ++i) {
      input_[m * n + i] = model.I[i].eval(s);
      if (m + 1 < fine_) {
        const double integral =
            delta_ / 6.0 * (model.c[i].eval(s) + 4.0 * model.c[i].eval(s + 0.5 * delta_) + model.c[i].eval(s + delta_));
        decay_[m * n + i] = std::exp(-integral);
      }
    }
  }

  auto tabulate = [&](const SignalExpr& coef) {
    std::vector<double> v(fine_);
    for (std::size_t m = 0; m < fine_; ++m) v[m] = coef.eval(s_at(m));
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!model.d_at(i, j).is_zero()) d_terms_.push_back({i, j, 0, tabulate(model.d_at(i, j)), 0.0, 0.0});
      if (!model.a_at(i, j).is_zero())
        a_terms_.push_back({i, j, 0, tabulate(model.a_at(i, j)), model.tau_at(i, j), 0.0});
      for (std::size_t l = 0; l < n; ++l)
        if (!model.b_at(i, j, l).is_zero())
          b_terms_.push_back({i, j, l, tabulate(model.b_at(i, j, l)), model.sigma_at(i, j), model.nu_at(i, j)});
    }
  }
}

CandidateFunction GammaOperator::convolve(const std::vector<double>& forcing) const {
  const std::size_t n = n_;
  std::vector<double> values(nodes_ * n);
  for (std::size_t i = 0; i < n; ++i) {
    // y(s_start) = 0; Simpson over fine cell pairs with the exact
    // exponential propagator.
    double y = 0.0;
    for (std::size_t m = 0;; m += 2) {
      if (m >= node_offset_ && (m - node_offset_) % kRefine == 0) values[(m - node_offset_) / kRefine * n + i] = y;
      if (m + 2 >= fine_) break;
      const double e1 = decay_[(m + 1) * n + i];
      const double e2 = decay_[m * n + i] * e1;
      y = e2 * y + delta_ / 3.0 * (e2 * forcing[m * n + i] + 4.0 * e1 * forcing[(m + 1) * n + i] +
                                   forcing[(m + 2) * n + i]);
    }
  }
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError("Gamma produced non-finite values");
  return CandidateFunction(t_lo_, step_, n, std::move(values));
}

CandidateFunction GammaOperator::phi0() const { return convolve(input_); }

CandidateFunction GammaOperator::apply(const CandidateFunction& phi) const {
  const std::size_t n = n_;
  if (phi.dim() != n || phi.nodes() != nodes_ || std::abs(phi.t_lo() - t_lo_) > 1e-9 * std::max(1.0, std::abs(t_lo_)) ||
      phi.step() != step_)
    throw ContractError("candidate does not live on the operator grid");
  for (const double v : phi.table().values())
    if (!std::isfinite(v)) throw NumericalError("candidate has non-finite values");

  std::vector<double> fine(fine_ * n);
  for (std::size_t m = 0; m < fine_; ++m) {
    const double s = s_start_ + delta_ * static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) {
      if (m >= node_offset_ && (m - node_offset_) % kRefine == 0)
        fine[m * n + j] = phi.at((m - node_offset_) / kRefine, j);
      else
        fine[m * n + j] = phi.value(s, j);
    }
  }
  auto delayed = [&](std::size_t m, double delay, std::size_t j) {
    const long k = fine_shift(delay, delta_);
    if (k >= 0 && static_cast<std::size_t>(k) <= m) return fine[(m - static_cast<std::size_t>(k)) * n + j];
    return phi.value(s_start_ + delta_ * static_cast<double>(m) - delay, j);
  };

  std::vector<double> forcing = input_;
  const NetModel& model = *model_;
  for (std::size_t m = 0; m < fine_; ++m) {
    for (const Term& e : d_terms_) forcing[m * n + e.i] += e.coef[m] * model.f[e.j](fine[m * n + e.j]);
    for (const Term& e : a_terms_) forcing[m * n + e.i] += e.coef[m] * model.g[e.j](delayed(m, e.delay, e.j));
    for (const Term& e : b_terms_)
      forcing[m * n + e.i] +=
          e.coef[m] * model.h[e.j](delayed(m, e.delay, e.j)) * model.h[e.l](delayed(m, e.delay2, e.l));
  }
  return convolve(forcing);
}

CandidateFunction phi0(const NetModel& model, const PicardOptions& options) {
  return GammaOperator(model, options).phi0();
}

CandidateFunction gamma_apply(const NetModel& model, const CandidateFunction& phi, const PicardOptions& options) {
  PicardOptions o = options;
  o.t_lo = phi.t_lo();
  o.t_hi = phi.t_hi();
  o.step = phi.step();
  GammaOperator op(model, o);
  if (op.window_shift() != 0.0) throw ContractError("candidate window lies below the coefficients' evaluation floor");
  return op.apply(phi);
}

PicardResult picard_solve(const NetModel& model, const PicardOptions& options) {
  const M7Constants k = constants_m7(model);
  if (options.require_contraction && !(k.q1 < 1.0))
    throw NumericalError("no contraction: q1 = " + format_real(k.q1) + " >= 1");

  const GammaOperator op(model, options);
  PicardResult r;
  r.q = k.q1;
  r.t_lo = op.t_lo();
  r.t_hi = op.t_hi();
  r.compare_lo = op.compare_lo();
  r.window_shift = op.window_shift();
  if (op.compare_lo() >= op.t_hi()) throw ContractError("Picard window is shorter than the truncation margin");

  r.phi0 = op.phi0();
  CandidateFunction current = r.phi0;
  for (int it = 0; it < options.max_iter; ++it) {
    CandidateFunction next = op.apply(current);
    const double diff = sup_distance(next, current, r.compare_lo);
    r.sup_diffs.push_back(diff);
    current = std::move(next);
    r.iterations = it + 1;
    if (diff < options.tol) {
      r.converged = true;
      break;
    }
  }
  for (std::size_t j = 1; j < r.sup_diffs.size(); ++j)
    if (r.sup_diffs[j - 1] > 0.0) r.empirical_ratio = std::max(r.empirical_ratio, r.sup_diffs[j] / r.sup_diffs[j - 1]);

  r.solution = current;
  r.residual = sup_distance(op.apply(current), current, r.compare_lo);
  r.radius = options.radius.value_or(k.ball_radius.value_or(kInf));
  r.distance = sup_distance(r.solution, r.phi0, r.compare_lo);
  r.ball_margin = r.radius - r.distance;
  return r;
}

BallCheck ball_check(const CandidateFunction& solution, const CandidateFunction& phi0, double radius, double from) {
  BallCheck b;
  b.distance = sup_distance(solution, phi0, from);
  b.inside = b.distance <= radius * (1 + 1e-6);
  return b;
}

History history_from(const CandidateFunction& phi, double t, double theta) {
  const double h = phi.step();
  const double lo_pos = (t - theta - phi.t_lo()) / h;
  const double hi_pos = (t - phi.t_lo()) / h;
  if (lo_pos < -1e-9 || hi_pos > static_cast<double>(phi.nodes() - 1) + 1e-9)
    throw ContractError("restart history [t - theta, t] is not covered by the candidate window");
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(lo_pos + 1e-9) - 2.0));
  const auto last = static_cast<std::size_t>(std::min(static_cast<double>(phi.nodes() - 1), std::ceil(hi_pos - 1e-9) + 2.0));
  std::vector<double> values;
  for (std::size_t k = first; k <= last; ++k)
    for (std::size_t c = 0; c < phi.dim(); ++c) values.push_back(phi.at(k, c));
  return History::table(UniformTable(phi.time(first), h, phi.dim(), std::move(values)));
}

}  // namespace papdyn
