#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "papdyn/activation.hpp"
#include "papdyn/history.hpp"
#include "papdyn/measures.hpp"
#include "papdyn/signal.hpp"

namespace papdyn {

/// High-order delayed network
///
///   x_i'(t) = -c_i(t) x_i(t) + sum_j d_ij(t) f_j(x_j(t))
///             + sum_j a_ij(t) g_j(x_j(t - tau_ij))
///             + sum_{j,l} b_ijl(t) h_j(x_j(t - sigma_ij)) h_l(x_l(t - nu_ij))
///             + I_i(t).
///
/// Matrices are stored row-major; b is indexed [i][j][l].
struct NetModel {
  std::size_t n = 0;
  std::vector<SignalExpr> c;
  std::vector<SignalExpr> I;
  std::vector<SignalExpr> d;
  std::vector<SignalExpr> a;
  std::vector<SignalExpr> b;
  std::vector<double> tau;
  std::vector<double> sigma;
  std::vector<double> nu_delay;
  std::vector<ActivationSpec> f;
  std::vector<ActivationSpec> g;
  std::vector<ActivationSpec> h;
  History history;
  /// Left end of the working domain [domain_floor, inf) on which the
  /// coefficient bounds are taken.
  double domain_floor = 0.0;

  /// n neurons, every coefficient zero, unit delays, sine activations and
  /// zero constant history.
  static NetModel zeros(std::size_t n);

  const SignalExpr& d_at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  const SignalExpr& a_at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  const SignalExpr& b_at(std::size_t i, std::size_t j, std::size_t l) const { return b[(i * n + j) * n + l]; }
  double tau_at(std::size_t i, std::size_t j) const { return tau[i * n + j]; }
  double sigma_at(std::size_t i, std::size_t j) const { return sigma[i * n + j]; }
  double nu_at(std::size_t i, std::size_t j) const { return nu_delay[i * n + j]; }

  /// Largest delay.
  double theta() const;
  double min_delay() const;

  /// Structural checks: dimensions, positive finite delays, activations
  /// vanishing at zero, history dimension. Throws ConfigError.
  void validate() const;

  /// Lowest time at which every coefficient may be evaluated.
  double evaluation_floor() const;

  friend bool operator==(const NetModel&, const NetModel&) = default;
};

/// Lookup of a delayed state component: (time, component) -> value.
using DelayLookup = std::function<double(double, std::size_t)>;

/// Right-hand side with the coefficient structure flattened to the
/// nonzero entries. Immutable after construction.
class RhsEvaluator {
 public:
  explicit RhsEvaluator(const NetModel& model);

  template <typename Lookup>
  void eval(double t, std::span<const double> x, const Lookup& lookup, std::span<double> out) const {
    for (std::size_t i = 0; i < n_; ++i) out[i] = -model_->c[i].eval(t) * x[i] + model_->I[i].eval(t);
    for (const Entry& e : d_) out[e.i] += e.coef->eval(t) * model_->f[e.j](x[e.j]);
    for (const Entry& e : a_) out[e.i] += e.coef->eval(t) * model_->g[e.j](lookup(t - e.delay, e.j));
    for (const Entry& e : b_) {
      out[e.i] += e.coef->eval(t) * model_->h[e.j](lookup(t - e.delay, e.j)) *
                  model_->h[e.l](lookup(t - e.delay2, e.l));
    }
  }

  bool has_delayed_terms() const { return !a_.empty() || !b_.empty(); }

 private:
  struct Entry {
    std::size_t i;
    std::size_t j;
    std::size_t l;
    const SignalExpr* coef;
    double delay;
    double delay2;
  };

  const NetModel* model_;
  std::size_t n_;
  std::vector<Entry> d_;
  std::vector<Entry> a_;
  std::vector<Entry> b_;
};

/// x'(t) for the state x(t) = x_now with delayed values from `history_at`.
std::vector<double> rhs(const NetModel& model, double t, std::span<const double> x_now, const DelayLookup& history_at);

struct BarBounds {
  std::size_t n = 0;
  std::vector<double> d;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> I;

  double d_at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  double a_at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double b_at(std::size_t i, std::size_t j, std::size_t l) const { return b[(i * n + j) * n + l]; }
};

/// Amplitude-sum sup bounds of every coefficient on [model.domain_floor, inf).
BarBounds bar_bounds(const NetModel& model);

/// inf_on(c_i) over the working domain.
std::vector<double> c_star(const NetModel& model);

struct M7Constants {
  double L = 0.0;
  double p1 = 0.0;
  double q1 = 0.0;
  std::vector<double> p1_rows;
  std::vector<double> q1_rows;
  std::optional<double> ball_radius;  // p1 L / (1 - p1) when p1 < 1
};

/// Constants for the constant-Lipschitz variant. Throws NumericalError when
/// some c*_i <= 0.
M7Constants constants_m7(const NetModel& model);

struct M5Constants {
  double p = 2.0;
  double q = 2.0;
  double p0 = 0.0;
  double q0 = 0.0;
  std::vector<double> norm_f;  // ||L_j^f||_p with respect to dx
  std::vector<double> norm_g;
  std::vector<double> norm_h;
  std::vector<double> mu_norm_f;  // same with respect to mu
  std::vector<double> mu_norm_g;
  std::vector<double> mu_norm_h;
  std::optional<double> ball_radius;
};

/// L^p norm of a decaying weight signal over its domain (mu = nullptr for dx).
/// Throws NumericalError when the weight has an almost periodic part.
double weight_lp_norm(const SignalExpr& weight, double p, const WeightedMeasure* mu = nullptr);

/// Constants for the weight-function variant. Requires a Lipschitz weight
/// on every activation; q = p / (p - 1).
M5Constants constants_m5(const NetModel& model, double p, const WeightedMeasure& mu);

struct Verdict {
  bool passed = false;
  bool applicable = true;
  bool numeric = false;  // decided by a numerical surrogate
  std::string detail;
};

struct HypothesisOptions {
  std::vector<double> z_schedule = kDefaultZSchedule;
  double ergodic_threshold = 1e-2;
  std::vector<double> m1_shifts = {0.5, 1.0, 2.0, 3.14159, 5.0, 10.0};
  Interval m1_excluded = {0.0, 0.0};
  std::vector<double> radii = kDefaultRadii;
  double m2_slope_tol = 0.05;
  double p_exponent = 2.0;
};

struct HypothesisReport {
  BarBounds bar;
  std::vector<double> c_star;
  double L = 0.0;
  std::optional<M5Constants> m5;
  std::optional<M7Constants> m7;
  std::optional<double> ball_radius;
  std::string variant;  // "M.7/M.8" or "M.5/M.6"
  double domain_floor = 0.0;
  std::map<std::string, Verdict> verdicts;
  bool overall_pass = false;
};

/// Runs every hypothesis check. Failures are verdict entries, not exceptions.
HypothesisReport check_hypotheses(const NetModel& model, const WeightedMeasure& mu, const WeightedMeasure& nu,
                                  const HypothesisOptions& options = {});

}  // namespace papdyn
