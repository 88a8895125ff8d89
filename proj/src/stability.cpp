#include "papdyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "papdyn/error.hpp"

namespace papdyn {

namespace {

struct RowSums {
  // Parts of the bracket: w-independent, and the three delayed families
  // which pick up e^{w delay}.
  double base = 0.0;
  std::vector<std::pair<double, double>> delayed;  // (weight, delay)
};

std::vector<RowSums> row_sums(const NetModel& model, const BarBounds& bb) {
  const std::size_t n = model.n;
  std::vector<RowSums> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rows[i].base += bb.d_at(i, j) * model.f[j].lipschitz_const();
      rows[i].delayed.emplace_back(bb.a_at(i, j) * model.g[j].lipschitz_const(), model.tau_at(i, j));
      for (std::size_t l = 0; l < n; ++l) {
        const double bl = bb.b_at(i, j, l);
        rows[i].delayed.emplace_back(bl * model.h[j].lipschitz_const() * model.h[l].bound_const(), model.sigma_at(i, j));
        rows[i].delayed.emplace_back(bl * model.h[j].bound_const() * model.h[l].lipschitz_const(), model.nu_at(i, j));
      }
    }
  }
  return rows;
}

double bracket(const RowSums& row, double w) {
  double s = row.base;
  for (const auto& [weight, delay] : row.delayed)
    if (weight != 0.0) s += weight * std::exp(w * delay);
  return s;
}

}  // namespace

std::vector<double> f_decay(const NetModel& model, double w) {
  const BarBounds bb = bar_bounds(model);
  const std::vector<double> cs = c_star(model);
  const std::vector<RowSums> rows = row_sums(model, bb);
  std::vector<double> out;
  for (std::size_t i = 0; i < model.n; ++i) out.push_back(cs[i] - w - bracket(rows[i], w));
  return out;
}

std::vector<double> margin_check(const NetModel& model, double lambda) {
  const BarBounds bb = bar_bounds(model);
  const std::vector<double> cs = c_star(model);
  const std::vector<RowSums> rows = row_sums(model, bb);
  std::vector<double> out;
  for (std::size_t i = 0; i < model.n; ++i) out.push_back(bracket(rows[i], lambda) / (cs[i] - lambda));
  return out;
}

DecayCertificate decay_rate(const NetModel& model, double safety) {
  if (!(safety > 0.0 && safety < 1.0)) throw ContractError("safety factor must lie in (0, 1)");
  const M7Constants k = constants_m7(model);
  if (!(k.q1 < 1.0)) throw NumericalError("no decay certificate: q1 = " + format_real(k.q1) + " >= 1");

  const BarBounds bb = bar_bounds(model);
  const std::vector<RowSums> rows = row_sums(model, bb);
  DecayCertificate cert;
  cert.c_star = c_star(model);

  double m_const = 0.0;
  for (std::size_t i = 0; i < model.n; ++i) {
    const double denom = bracket(rows[i], 0.0);
    if (!(denom > 0.0))
      throw NumericalError("no coupling in row " + std::to_string(i + 1) + ": envelope constant M is undefined");
    m_const = std::max(m_const, cert.c_star[i] / denom);
  }
  cert.M = m_const;

  for (std::size_t i = 0; i < model.n; ++i) {
    const double ci = cert.c_star[i];
    auto F = [&](double w) { return ci - w - bracket(rows[i], w); };
    double lo = 0.0;
    double hi = ci + 1.0;  // F(c*_i) <= 0 already; keep a margin
    while (F(hi) > 0.0) hi *= 2.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (F(mid) > 0.0 ? lo : hi) = mid;
    }
    cert.eps_star.push_back(0.5 * (lo + hi));
  }
  cert.eta = *std::min_element(cert.eps_star.begin(), cert.eps_star.end());
  const double cmin = *std::min_element(cert.c_star.begin(), cert.c_star.end());
  cert.lambda = safety * std::min(cert.eta, cmin);
  cert.margin_check = margin_check(model, cert.lambda);
  for (double m : cert.margin_check)
    if (!(m < 1.0)) throw NumericalError("rate condition fails at lambda = " + format_real(cert.lambda));
  return cert;
}

EnvelopeReport envelope_report(const Trajectory& a, const Trajectory& b, const DecayCertificate& cert,
                               double horizon) {
  if (a.t0() != b.t0() || a.step() != b.step() || a.dim() != b.dim())
    throw ContractError("trajectories must share t0, step and dimension");
  EnvelopeReport r;
  const double t0 = a.t0();
  const double theta = a.theta();
  r.phi_norm = history_sup_distance(a.history(), b.history(), t0 - theta, t0, a.step());
  r.trivial = r.phi_norm == 0.0;

  const std::size_t count = std::min(a.nodes(), b.nodes());
  std::vector<double> fit_t;
  std::vector<double> fit_y;
  for (std::size_t k = 0; k < count; ++k) {
    const double rel = a.time(k) - t0;
    if (rel > horizon + 1e-9) break;
    double norm = 0.0;
    for (std::size_t c = 0; c < a.dim(); ++c) norm = std::max(norm, std::abs(a.value(k)[c] - b.value(k)[c]));
    const double bound = cert.M * r.phi_norm * std::exp(-cert.lambda * rel);
    r.times.push_back(rel);
    r.norms.push_back(norm);
    r.bounds.push_back(bound);
    if (bound > 0.0) r.worst_ratio = std::max(r.worst_ratio, norm / bound);
    if (norm > bound + 1e-9 && r.holds) {
      r.holds = false;
      r.first_violation = rel;
    }
    if (rel >= 0.5 * horizon && norm > 1e-13 * std::max(r.phi_norm, 1e-300)) {
      fit_t.push_back(rel);
      fit_y.push_back(std::log(norm));
    }
  }
  if (fit_t.size() >= 2) {
    double mt = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < fit_t.size(); ++k) {
      mt += fit_t[k];
      my += fit_y[k];
    }
    mt /= static_cast<double>(fit_t.size());
    my /= static_cast<double>(fit_t.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < fit_t.size(); ++k) {
      sxy += (fit_t[k] - mt) * (fit_y[k] - my);
      sxx += (fit_t[k] - mt) * (fit_t[k] - mt);
    }
    r.fitted_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return r;
}

EnvelopeReport verify_decay(const NetModel& model, const History& history_a, const History& history_b,
                            const DecayCertificate& cert, double horizon, double step, double t0) {
  // The two trajectories are independent.
  std::optional<Trajectory> ta;
  std::exception_ptr failure;
  std::thread worker([&] {
    try {
      ta.emplace(integrate(model, history_a, t0, t0 + horizon, step));
    } catch (...) {
      failure = std::current_exception();
    }
  });
  std::optional<Trajectory> tb;
  try {
    tb.emplace(integrate(model, history_b, t0, t0 + horizon, step));
  } catch (...) {
    worker.join();
    throw;
  }
  worker.join();
  if (failure) std::rethrow_exception(failure);
  return envelope_report(*ta, *tb, cert, horizon);
}

}  // namespace papdyn
