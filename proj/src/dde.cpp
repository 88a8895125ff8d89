#include "papdyn/dde.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "papdyn/error.hpp"

namespace papdyn {

Trajectory::Trajectory(double t0, double step, std::size_t dim, double theta, History history)
    : t0_(t0), step_(step), dim_(dim), theta_(theta), history_(std::move(history)) {
  if (!(step_ > 0.0)) throw ContractError("trajectory step must be positive");
}

void Trajectory::push_node(std::span<const double> value, std::span<const double> deriv) {
  values_.insert(values_.end(), value.begin(), value.end());
  derivs_.insert(derivs_.end(), deriv.begin(), deriv.end());
}

double Trajectory::sample(double t, std::size_t c) const {
  if (t <= t0_) {
    if (t < t0_ - theta_ - 1e-12)
      throw ContractError("trajectory lookup at t = " + format_real(t) + " below the history range");
    std::vector<double> h(dim_);
    history_.value(t, h);
    return h[c];
  }
  const double pos = (t - t0_) / step_;
  const double last = static_cast<double>(nodes() - 1);
  if (pos > last * (1 + 1e-12) + 1e-9)
    throw ContractError("trajectory lookup at t = " + format_real(t) + " beyond the computed range");
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-10) return value(static_cast<std::size_t>(std::min(nearest, last)))[c];
  const auto k = static_cast<std::size_t>(std::min(std::floor(pos), last - 1));
  const double s = pos - static_cast<double>(k);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * value(k)[c] + h10 * step_ * deriv(k)[c] + h01 * value(k + 1)[c] + h11 * step_ * deriv(k + 1)[c];
}

void Trajectory::sample(double t, std::span<double> out) const {
  if (t <= t0_) {
    if (t < t0_ - theta_ - 1e-12)
      throw ContractError("trajectory lookup at t = " + format_real(t) + " below the history range");
    history_.value(t, out);
    return;
  }
  for (std::size_t c = 0; c < dim_; ++c) out[c] = sample(t, c);
}

std::vector<double> Trajectory::sample(double t) const {
  std::vector<double> out(dim_);
  sample(t, out);
  return out;
}

Trajectory integrate(const NetModel& model, const History& history, double t0, double t_end, double step) {
  model.validate();
  if (history.dim() != model.n) throw ContractError("history dimension does not match the model");
  if (!(step > 0.0)) throw ContractError("step must be positive");
  if (!(t_end > t0)) throw ContractError("t_end must exceed t0");
  const RhsEvaluator evaluator(model);
  if (evaluator.has_delayed_terms() && step > model.min_delay() * (1 + 1e-12))
    throw ContractError("step " + format_real(step) + " exceeds the smallest delay " + format_real(model.min_delay()));

  const std::size_t n = model.n;
  const double span = t_end - t0;
  auto steps = static_cast<std::size_t>(std::llround(span / step));
  if (std::abs(static_cast<double>(steps) * step - span) > 1e-9 * std::max(1.0, span))
    steps = static_cast<std::size_t>(std::ceil(span / step));

  Trajectory traj(t0, step, n, model.theta(), history);
  auto lookup = [&traj](double t, std::size_t j) { return traj.sample(t, j); };

  std::vector<double> x = history.value(t0);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  evaluator.eval(t0, x, lookup, k1);
  traj.push_node(x, k1);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = traj.time(k);
    // k1 is the derivative stored at node k.
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
    evaluator.eval(t + 0.5 * step, tmp, lookup, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
    evaluator.eval(t + 0.5 * step, tmp, lookup, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + step * k3[i];
    evaluator.eval(t + step, tmp, lookup, k4);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      if (!std::isfinite(x[i]))
        throw NumericalError("integration diverged at t = " + format_real(t + step) + " (component " +
                             std::to_string(i + 1) + ")");
    }
    // Delayed lookups at t + step land at or before t, so the derivative
    // can be formed before the node is stored.
    evaluator.eval(traj.time(k + 1), x, lookup, k1);
    traj.push_node(x, k1);
  }
  return traj;
}

Trajectory integrate(const NetModel& model, double t_end, double step) {
  return integrate(model, model.history, 0.0, t_end, step);
}

void write_csv(const Trajectory& traj, std::ostream& os) {
  os << "t";
  for (std::size_t i = 0; i < traj.dim(); ++i) os << ",x_" << i + 1;
  os << "\n";
  char buf[40];
  for (std::size_t k = 0; k < traj.nodes(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.time(k));
    os << buf;
    for (double v : traj.value(k)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << "," << buf;
    }
    os << "\n";
  }
}

}  // namespace papdyn
