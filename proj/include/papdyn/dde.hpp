#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "papdyn/history.hpp"
#include "papdyn/netmodel.hpp"

namespace papdyn {

/// Solution on a uniform grid t0 + k*step with node values and derivatives.
/// Between nodes it is the cubic Hermite interpolant; at or before t0 it is
/// the history function.
class Trajectory {
 public:
  Trajectory(double t0, double step, std::size_t dim, double theta, History history);

  void sample(double t, std::span<double> out) const;
  std::vector<double> sample(double t) const;
  double sample(double t, std::size_t component) const;

  double t0() const { return t0_; }
  double step() const { return step_; }
  double theta() const { return theta_; }
  std::size_t dim() const { return dim_; }
  std::size_t nodes() const { return values_.size() / dim_; }
  double time(std::size_t k) const { return t0_ + step_ * static_cast<double>(k); }
  double t_end() const { return time(nodes() - 1); }
  std::span<const double> value(std::size_t k) const { return {values_.data() + k * dim_, dim_}; }
  std::span<const double> deriv(std::size_t k) const { return {derivs_.data() + k * dim_, dim_}; }
  const History& history() const { return history_; }

  // Appends a grid node; used by the integrator.
  void push_node(std::span<const double> value, std::span<const double> deriv);

 private:
  double t0_;
  double step_;
  std::size_t dim_;
  double theta_;
  History history_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

/// Classical RK4 on a uniform grid, delayed arguments resolved through the
/// already computed prefix. Requires step <= smallest delay.
Trajectory integrate(const NetModel& model, const History& history, double t0, double t_end, double step);
Trajectory integrate(const NetModel& model, double t_end, double step);

/// Header `t,x_1,...,x_n`, 17 significant digits, one row per node.
void write_csv(const Trajectory& traj, std::ostream& os);

}  // namespace papdyn
