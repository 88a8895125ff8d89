#pragma once

#include <string>
#include <vector>

#include "papdyn/expr.hpp"
#include "papdyn/quadrature.hpp"
#include "papdyn/signal.hpp"

namespace papdyn {

/// Positive measure on R with a piecewise density. Pieces are contiguous;
/// the first starts at -inf and the last ends at +inf.
class WeightedMeasure {
 public:
  struct Piece {
    double lo;
    double hi;
    Expr density;
  };

  WeightedMeasure() = default;

  static WeightedMeasure lebesgue();
  static WeightedMeasure from_density(std::string name, Expr density);
  /// left on (-inf, 0], right on (0, inf).
  static WeightedMeasure two_piece(std::string name, Expr left, Expr right);

  const std::string& name() const { return name_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_two_piece() const { return pieces_.size() == 2; }

  double density(double t) const;

  /// Interval mass; exact for constant densities. Throws NumericalError
  /// if a negative density value is encountered.
  double mass(double a, double b) const;

  /// Integral of g(t) * density(t) over [a, b].
  double integrate(const ScalarFn& g, double a, double b) const;

  friend bool operator==(const WeightedMeasure& x, const WeightedMeasure& y) {
    if (x.name_ != y.name_ || x.pieces_.size() != y.pieces_.size()) return false;
    for (std::size_t k = 0; k < x.pieces_.size(); ++k)
      if (x.pieces_[k].lo != y.pieces_[k].lo || x.pieces_[k].hi != y.pieces_[k].hi ||
          !(x.pieces_[k].density == y.pieces_[k].density))
        return false;
    return true;
  }

 private:
  std::string name_;
  std::vector<Piece> pieces_;
};

struct ErgodicVerdict {
  std::vector<double> z_values;
  std::vector<double> remainders;
  double trend_slope = 0.0;
  bool passed = false;
  double threshold = 1e-2;
  double domain_lo = -kInf;  // > -z when the signal is one-sided
};

inline const std::vector<double> kDefaultZSchedule = {5, 10, 20, 40, 80, 160};

/// (1 / nu([-z, z])) * integral over [max(-z, domain_lo), z] of |f| dmu.
double ergodic_remainder(const ScalarFn& f, const WeightedMeasure& mu, const WeightedMeasure& nu, double z,
                         double domain_lo = -kInf);
/// Signal overload: one-sided signals are integrated over their domain only.
double ergodic_remainder(const SignalExpr& f, const WeightedMeasure& mu, const WeightedMeasure& nu, double z);

ErgodicVerdict ergodicity_trend(const ScalarFn& f, const WeightedMeasure& mu, const WeightedMeasure& nu,
                                const std::vector<double>& z_schedule = kDefaultZSchedule, double threshold = 1e-2,
                                double domain_lo = -kInf);
ErgodicVerdict ergodicity_trend(const SignalExpr& f, const WeightedMeasure& mu, const WeightedMeasure& nu,
                                const std::vector<double>& z_schedule = kDefaultZSchedule, double threshold = 1e-2);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct M1Result {
  double beta_bound = 0.0;
  bool passed = false;
  std::string detail;
};

struct M1Options {
  double sample_radius = 100.0;
  double sample_step = 1e-2;
};

/// Translation condition via the density ratio sup rho(t + tau) / rho(t)
/// over t outside the excluded interval, maximized over the shifts.
M1Result check_m1(const WeightedMeasure& m, const std::vector<double>& shifts, Interval excluded = {0.0, 0.0},
                  const M1Options& opts = {});

struct M2Result {
  std::vector<double> radii;
  std::vector<double> ratios;
  double sup_ratio = 0.0;
  double slope = 0.0;
  bool passed = false;
};

inline const std::vector<double> kDefaultRadii = {10,  20,  30,  40,  50,  60,  70,  80,
                                                 90, 100, 110, 120, 130, 140, 150, 160};

/// Ratio mu([-r,r]) / nu([-r,r]) must not diverge: the Theil-Sen slope of
/// log ratio against log r stays below slope_tol.
M2Result check_m2(const WeightedMeasure& mu, const WeightedMeasure& nu,
                  const std::vector<double>& radii = kDefaultRadii, double slope_tol = 0.05);

struct MeasureClassResult {
  std::vector<double> masses;
  double growth_slope = 0.0;
  bool infinite_mass = false;
};

/// Numeric stand-in for m(R) = inf: mass([-r,r]) must keep growing with r.
MeasureClassResult check_measure_class(const WeightedMeasure& m, const std::vector<double>& radii = kDefaultRadii,
                                       double min_growth = 0.5);

}  // namespace papdyn
