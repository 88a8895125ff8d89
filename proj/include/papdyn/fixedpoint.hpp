#pragma once

#include <optional>
#include <vector>

#include "papdyn/history.hpp"
#include "papdyn/netmodel.hpp"

namespace papdyn {

struct PicardOptions {
  double t_lo = -40.0;
  double t_hi = 40.0;
  double step = 1e-2;       // candidate grid; the kernel quadrature uses step / 4
  double eps_tail = 1e-10;  // discarded mass of the truncated kernel integral
  double tol = 1e-8;
  int max_iter = 1000;
  bool require_contraction = true;
  std::optional<double> radius;  // defaults to the checker's p1 L / (1 - p1)
};

/// Vector function sampled on a uniform grid over [t_lo, t_hi], continued
/// to the left by its value at t_lo and interpolated by cubics in between.
class CandidateFunction {
 public:
  CandidateFunction() = default;
  CandidateFunction(double t_lo, double step, std::size_t dim, std::vector<double> values);

  double value(double t, std::size_t component) const;

  double t_lo() const { return table_.t0(); }
  double t_hi() const { return table_.t_end(); }
  double step() const { return table_.step(); }
  std::size_t dim() const { return table_.dim(); }
  std::size_t nodes() const { return table_.nodes(); }
  double time(std::size_t k) const { return t_lo() + step() * static_cast<double>(k); }
  double at(std::size_t k, std::size_t c) const { return table_.at(k, c); }
  const UniformTable& table() const { return table_; }

  /// Max over nodes with t >= from of the component-wise max |value|.
  double sup_norm(double from = -kInf) const;

 private:
  UniformTable table_;
};

/// Max |a - b| over the shared grid nodes with t >= from. Throws
/// ContractError when the grids differ.
double sup_distance(const CandidateFunction& a, const CandidateFunction& b, double from = -kInf);

/// The integral operator
///   (Gamma phi)_i(t) = int_{-inf}^t exp(-int_s^t c_i) F_i[phi](s) ds
/// discretized on a finite window. The lower limit is cut at t_lo - W with
/// W = max_i ln(Fbound_i / (c*_i eps_tail)) / c*_i, Fbound_i being the uniform
/// bound of |F_i|; the discarded part is at most eps_tail.
class GammaOperator {
 public:
  GammaOperator(const NetModel& model, const PicardOptions& options);

  CandidateFunction phi0() const;
  CandidateFunction apply(const CandidateFunction& phi) const;

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  /// Start of the comparison window, t_lo + W.
  double compare_lo() const { return t_lo_ + window_; }
  double truncation() const { return window_; }
  /// Amount the requested window was moved right to respect the
  /// coefficients' evaluation floor.
  double window_shift() const { return shift_; }
  std::size_t nodes() const { return nodes_; }

 private:
  CandidateFunction convolve(const std::vector<double>& forcing) const;

  const NetModel* model_;
  std::size_t n_;
  double step_;
  double t_lo_;
  double t_hi_;
  double window_;
  double shift_ = 0.0;
  std::size_t nodes_;
  double s_start_;
  double delta_;
  std::size_t fine_;          // number of fine points
  std::size_t node_offset_;   // fine index of t_lo
  std::vector<double> decay_; // exp(-(C_{m+1} - C_m)) per component, row m*n + i
  std::vector<double> input_; // I_i(s_m)

  struct Term {
    std::size_t i, j, l;
    std::vector<double> coef;  // on the fine grid
    double delay, delay2;
  };
  std::vector<Term> d_terms_;
  std::vector<Term> a_terms_;
  std::vector<Term> b_terms_;
};

CandidateFunction phi0(const NetModel& model, const PicardOptions& options = {});
CandidateFunction gamma_apply(const NetModel& model, const CandidateFunction& phi, const PicardOptions& options = {});

struct PicardResult {
  CandidateFunction solution;
  CandidateFunction phi0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> sup_diffs;
  double empirical_ratio = 0.0;
  double residual = 0.0;
  double radius = 0.0;
  double distance = 0.0;     // ||x* - phi0|| on the comparison window
  double ball_margin = 0.0;  // radius - distance
  double t_lo = 0.0;
  double t_hi = 0.0;
  double compare_lo = 0.0;
  double window_shift = 0.0;
  double q = 0.0;
};

/// Picard iteration phi0, Gamma phi0, Gamma^2 phi0, ... until successive
/// iterates differ by less than tol on the comparison window.
PicardResult picard_solve(const NetModel& model, const PicardOptions& options = {});

struct BallCheck {
  double distance = 0.0;
  bool inside = false;
};

BallCheck ball_check(const CandidateFunction& solution, const CandidateFunction& phi0, double radius,
                     double from = -kInf);

/// History on [t - theta, t] taken from a candidate, for restarting the
/// integrator inside the comparison window.
History history_from(const CandidateFunction& phi, double t, double theta);

}  // namespace papdyn
