#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "papdyn/signal.hpp"

namespace papdyn {

enum class ActivationShape { Sine, Tanh, Saturation, Table };

std::string_view shape_name(ActivationShape shape);
ActivationShape shape_from_name(std::string_view name);

/// State nonlinearity x -> f(x) together with its Lipschitz constant and
/// sup bound. Every activation vanishes at the origin.
///
/// `Saturation` is (|x+1| - |x-1|)/2. `Table` interpolates linearly between
/// samples and stays constant outside the sampled range.
class ActivationSpec {
 public:
  ActivationSpec() = default;

  static ActivationSpec sine();
  static ActivationSpec tanh();
  static ActivationSpec saturation();
  static ActivationSpec table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;

  ActivationShape shape() const { return shape_; }
  double lipschitz_const() const { return lipschitz_; }
  double bound_const() const { return bound_; }
  const std::vector<double>& table_x() const { return xs_; }
  const std::vector<double>& table_y() const { return ys_; }
  const std::optional<SignalExpr>& lipschitz_weight() const { return weight_; }

  /// Declared constants may be looser than the intrinsic ones, never tighter.
  ActivationSpec with_constants(double lipschitz, double bound) const;
  ActivationSpec with_weight(SignalExpr weight) const;

  /// Intrinsic constants of the shape (slopes and range of the table).
  double intrinsic_lipschitz() const;
  double intrinsic_bound() const;

  friend bool operator==(const ActivationSpec&, const ActivationSpec&) = default;

 private:
  ActivationShape shape_ = ActivationShape::Sine;
  double lipschitz_ = 1.0;
  double bound_ = 1.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::optional<SignalExpr> weight_;
};

struct ActivationAudit {
  bool vanishes_at_zero = true;
  double max_quotient = 0.0;  // sampled |f(x)-f(y)|/|x-y|
  double max_abs = 0.0;       // sampled |f(x)|
  bool passed = true;
};

/// Sampled check of f(0) = 0, the Lipschitz quotient and the bound.
ActivationAudit audit_activation(const ActivationSpec& act, double range = 20.0, std::size_t samples = 4001);

}  // namespace papdyn
