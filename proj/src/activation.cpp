#include "papdyn/activation.hpp"

#include <algorithm>
#include <cmath>

#include "papdyn/error.hpp"

namespace papdyn {

std::string_view shape_name(ActivationShape shape) {
  switch (shape) {
    case ActivationShape::Sine:
      return "sine";
    case ActivationShape::Tanh:
      return "tanh";
    case ActivationShape::Saturation:
      return "piecewise_linear_saturation";
    case ActivationShape::Table:
      return "custom_table";
  }
  return "?";
}

ActivationShape shape_from_name(std::string_view name) {
  if (name == "sine") return ActivationShape::Sine;
  if (name == "tanh") return ActivationShape::Tanh;
  if (name == "piecewise_linear_saturation") return ActivationShape::Saturation;
  if (name == "custom_table") return ActivationShape::Table;
  throw ConfigError("unknown activation shape '" + std::string(name) + "'");
}

ActivationSpec ActivationSpec::sine() { return ActivationSpec{}; }

ActivationSpec ActivationSpec::tanh() {
  ActivationSpec a;
  a.shape_ = ActivationShape::Tanh;
  return a;
}

ActivationSpec ActivationSpec::saturation() {
  ActivationSpec a;
  a.shape_ = ActivationShape::Saturation;
  return a;
}

ActivationSpec ActivationSpec::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw ConfigError("custom_table needs >= 2 samples of equal length");
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (!(xs[k] > xs[k - 1])) throw ConfigError("custom_table abscissae must be strictly increasing");
  ActivationSpec a;
  a.shape_ = ActivationShape::Table;
  a.xs_ = std::move(xs);
  a.ys_ = std::move(ys);
  if (std::abs(a(0.0)) > 1e-15) throw ConfigError("custom_table activation must vanish at 0");
  a.lipschitz_ = a.intrinsic_lipschitz();
  a.bound_ = a.intrinsic_bound();
  return a;
}

double ActivationSpec::operator()(double x) const {
  switch (shape_) {
    case ActivationShape::Sine:
      return std::sin(x);
    case ActivationShape::Tanh:
      return std::tanh(x);
    case ActivationShape::Saturation:
      return 0.5 * (std::abs(x + 1.0) - std::abs(x - 1.0));
    case ActivationShape::Table: {
      if (x <= xs_.front()) return ys_.front();
      if (x >= xs_.back()) return ys_.back();
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
      const double w = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return ys_[k - 1] + w * (ys_[k] - ys_[k - 1]);
    }
  }
  return 0.0;
}

double ActivationSpec::intrinsic_lipschitz() const {
  if (shape_ != ActivationShape::Table) return 1.0;
  double slope = 0.0;
  for (std::size_t k = 1; k < xs_.size(); ++k)
    slope = std::max(slope, std::abs((ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1])));
  return slope;
}

double ActivationSpec::intrinsic_bound() const {
  if (shape_ != ActivationShape::Table) return 1.0;
  double bound = 0.0;
  for (double y : ys_) bound = std::max(bound, std::abs(y));
  return bound;
}

ActivationSpec ActivationSpec::with_constants(double lipschitz, double bound) const {
  if (!(lipschitz >= intrinsic_lipschitz() * (1 - 1e-12)) || !(bound >= intrinsic_bound() * (1 - 1e-12)))
    throw ConfigError("declared activation constants (L = " + format_real(lipschitz) + ", M = " +
                      format_real(bound) + ") are tighter than the shape allows");
  ActivationSpec a = *this;
  a.lipschitz_ = lipschitz;
  a.bound_ = bound;
  return a;
}

ActivationSpec ActivationSpec::with_weight(SignalExpr weight) const {
  ActivationSpec a = *this;
  a.weight_ = std::move(weight);
  return a;
}

ActivationAudit audit_activation(const ActivationSpec& act, double range, std::size_t samples) {
  ActivationAudit audit;
  audit.vanishes_at_zero = act(0.0) == 0.0;
  const double h = 2 * range / static_cast<double>(samples - 1);
  double prev = act(-range);
  audit.max_abs = std::abs(prev);
  for (std::size_t k = 1; k < samples; ++k) {
    const double x = -range + static_cast<double>(k) * h;
    const double y = act(x);
    audit.max_abs = std::max(audit.max_abs, std::abs(y));
    audit.max_quotient = std::max(audit.max_quotient, std::abs(y - prev) / h);
    prev = y;
  }
  // Pairs straddling the origin at several scales.
  for (double s : {1e-6, 1e-3, 0.1, 0.5, 1.0, 3.0}) {
    audit.max_quotient = std::max(audit.max_quotient, std::abs(act(s) - act(-s)) / (2 * s));
  }
  audit.passed = audit.vanishes_at_zero && audit.max_quotient <= act.lipschitz_const() * (1 + 1e-9) &&
                 audit.max_abs <= act.bound_const() * (1 + 1e-12);
  return audit;
}

}  // namespace papdyn
