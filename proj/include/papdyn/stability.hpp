#pragma once

#include <vector>

#include "papdyn/dde.hpp"
#include "papdyn/history.hpp"
#include "papdyn/netmodel.hpp"

namespace papdyn {

struct DecayCertificate {
  std::vector<double> eps_star;  // roots of F_i
  double eta = 0.0;              // min eps_star
  double lambda = 0.0;
  double M = 0.0;
  std::vector<double> margin_check;  // must all be < 1
  std::vector<double> c_star;
};

/// F_i(w) = c*_i - w - sum_j [ d_ij L^f_j + a_ij L^g_j e^{w tau_ij}
///          + sum_l b_ijl (L^h_j e^{w sigma_ij} M^h_l + M^h_j L^h_l e^{w nu_ij}) ]
/// with barred (sup) coefficients.
std::vector<double> f_decay(const NetModel& model, double w);

/// Per-row bracket of the rate condition evaluated at lambda:
/// (1 / (c*_i - lambda)) [ ... ] with the same sums as f_decay.
std::vector<double> margin_check(const NetModel& model, double lambda);

/// Bisection roots of F_i, rate lambda = safety * min(eta, min c*_i) and the
/// envelope constant M. Throws NumericalError when q1 >= 1 or some row has
/// no coupling (M undefined).
DecayCertificate decay_rate(const NetModel& model, double safety = 0.99);

struct EnvelopeReport {
  std::vector<double> times;  // relative to t0
  std::vector<double> norms;  // ||x_a - x_b||_inf at the nodes
  std::vector<double> bounds; // M ||phi|| e^{-lambda t}
  double phi_norm = 0.0;
  bool holds = true;
  double first_violation = -1.0;  // relative time, -1 when none
  double worst_ratio = 0.0;       // max norm / bound over nodes with bound > 0
  double fitted_slope = 0.0;      // least squares slope of log ||y|| on the second half
  bool trivial = false;           // identical histories
};

/// Integrates two solutions from t0 and checks the exponential envelope at
/// every node of [t0, t0 + horizon], with 1e-9 absolute slack.
EnvelopeReport verify_decay(const NetModel& model, const History& history_a, const History& history_b,
                            const DecayCertificate& cert, double horizon, double step = 1e-3, double t0 = 0.0);

/// Envelope check on two already integrated trajectories sharing t0 and step.
EnvelopeReport envelope_report(const Trajectory& a, const Trajectory& b, const DecayCertificate& cert, double horizon);

}  // namespace papdyn
