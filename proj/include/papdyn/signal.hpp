#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "papdyn/expr.hpp"

namespace papdyn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ApKind { Const, Sin, Cos };
enum class ErgKind { ExpDecay, ExpAbsDecay, RationalDecay };

/// amplitude * sin(frequency * t + phase), the cos analogue, or a constant.
struct ApTerm {
  double amplitude = 0.0;
  ApKind kind = ApKind::Const;
  double frequency = 0.0;
  double phase = 0.0;

  friend bool operator==(const ApTerm&, const ApTerm&) = default;
};

/// amplitude * k(t) with k one of e^{-t}, e^{-|t|}, 1/(1+t^2).
struct ErgTerm {
  double amplitude = 0.0;
  ErgKind kind = ErgKind::ExpAbsDecay;

  friend bool operator==(const ErgTerm&, const ErgTerm&) = default;
};

/// Time signal of the form (sum of trigonometric terms + sum of decaying
/// terms) / scale.
///
/// The trigonometric part is almost periodic; the decaying part is the
/// ergodic perturbation. `e^{-t}` terms are one-sided: they are only
/// evaluated on [t_floor, inf), which defaults to [0, inf).
class SignalExpr {
 public:
  static constexpr double kDefaultExpFloor = 0.0;

  SignalExpr() = default;
  SignalExpr(std::vector<ApTerm> ap, std::vector<ErgTerm> erg, double scale = 1.0,
             double exp_floor = kDefaultExpFloor);

  /// Parses grammar text and normalizes it into the structured form.
  /// Throws ConfigError when the expression falls outside the supported shape.
  static SignalExpr parse(std::string_view text, double exp_floor = kDefaultExpFloor);
  static SignalExpr from_expr(const Expr& expr, double exp_floor = kDefaultExpFloor);
  static SignalExpr constant(double value);

  double eval(double t) const;

  /// Lowest admissible time: exp_floor when e^{-t} terms are present, else -inf.
  double domain_floor() const;

  bool is_zero() const { return ap_.empty() && erg_.empty(); }
  bool has_ap() const { return !ap_.empty(); }
  bool has_erg() const { return !erg_.empty(); }

  const std::vector<ApTerm>& ap_terms() const { return ap_; }
  const std::vector<ErgTerm>& erg_terms() const { return erg_; }
  double scale() const { return scale_; }
  double exp_floor() const { return exp_floor_; }

  /// Text that re-parses to an identical structure.
  std::string to_string() const;

  SignalExpr scaled(double factor) const;

  friend bool operator==(const SignalExpr&, const SignalExpr&) = default;

 private:
  std::vector<ApTerm> ap_;
  std::vector<ErgTerm> erg_;
  double scale_ = 1.0;
  double exp_floor_ = kDefaultExpFloor;
};

/// Amplitude-sum upper bound of sup |expr| over [t0, inf).
/// Throws UnboundedError for e^{-t} terms on an unbounded-below domain and
/// DomainError when t0 is below the signal's floor.
double sup_abs_bound(const SignalExpr& expr, double t0);

/// Lower bound of inf expr over [t0, inf).
double inf_on(const SignalExpr& expr, double t0);

struct RefinedBound {
  double bound = 0.0;
  double sampled = 0.0;  // grid estimate; never exceeds a valid upper bound
};

/// Certified bound together with a grid-sampled estimate over [t0, t0 + span].
RefinedBound sup_abs_refined(const SignalExpr& expr, double t0, double span = 200.0,
                             std::size_t samples = 200001);
RefinedBound inf_refined(const SignalExpr& expr, double t0, double span = 200.0,
                         std::size_t samples = 200001);

/// Structural split into (almost periodic part, ergodic part).
std::pair<SignalExpr, SignalExpr> decompose(const SignalExpr& expr);

/// Supremum of the decay kernel over [t0, inf).
double erg_kernel_sup(ErgKind kind, double t0);
double erg_kernel(ErgKind kind, double t);

}  // namespace papdyn
