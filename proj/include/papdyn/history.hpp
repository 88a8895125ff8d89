#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "papdyn/expr.hpp"

namespace papdyn {

/// Cubic (4-point Lagrange) interpolation of uniformly sampled vector data.
/// Node values are reproduced exactly. Outside [t0, t_end] the end values
/// are held constant when `clamp` is set, otherwise a ContractError is thrown.
class UniformTable {
 public:
  UniformTable() = default;
  UniformTable(double t0, double step, std::size_t dim, std::vector<double> values);

  void sample(double t, std::span<double> out, bool clamp = false) const;
  double sample(double t, std::size_t component, bool clamp = false) const;

  double t0() const { return t0_; }
  double step() const { return step_; }
  double t_end() const { return t0_ + step_ * static_cast<double>(nodes() - 1); }
  std::size_t dim() const { return dim_; }
  std::size_t nodes() const { return dim_ ? values_.size() / dim_ : 0; }
  const std::vector<double>& values() const { return values_; }
  double at(std::size_t node, std::size_t component) const { return values_[node * dim_ + component]; }

 private:
  double t0_ = 0.0;
  double step_ = 1.0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// Initial function of the delayed system on [-theta, t0].
class History {
 public:
  enum class Kind { Constant, Expressions, Table, Function };
  using Fn = std::function<void(double, std::span<double>)>;

  History() = default;

  static History constant(std::vector<double> values);
  static History expressions(std::vector<Expr> components);
  static History table(UniformTable table);
  static History function(std::size_t dim, Fn fn);

  void value(double t, std::span<double> out) const;
  std::vector<double> value(double t) const;

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& constant_values() const { return constant_; }
  const std::vector<Expr>& components() const { return exprs_; }

  friend bool operator==(const History& a, const History& b);

 private:
  Kind kind_ = Kind::Constant;
  std::size_t dim_ = 0;
  std::vector<double> constant_;
  std::vector<Expr> exprs_;
  std::shared_ptr<const UniformTable> table_;
  Fn fn_;
};

/// Sup-norm of (a - b) sampled on [lo, hi] at the given step (endpoints included).
double history_sup_distance(const History& a, const History& b, double lo, double hi, double step);

}  // namespace papdyn
