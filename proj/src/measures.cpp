#include "papdyn/measures.hpp"

#include <algorithm>
#include <cmath>

#include "papdyn/error.hpp"

namespace papdyn {

WeightedMeasure WeightedMeasure::lebesgue() { return from_density("lebesgue", Expr::constant(1.0)); }

WeightedMeasure WeightedMeasure::from_density(std::string name, Expr density) {
  WeightedMeasure m;
  m.name_ = std::move(name);
  m.pieces_.push_back({-kInf, kInf, std::move(density)});
  return m;
}

WeightedMeasure WeightedMeasure::two_piece(std::string name, Expr left, Expr right) {
  WeightedMeasure m;
  m.name_ = std::move(name);
  m.pieces_.push_back({-kInf, 0.0, std::move(left)});
  m.pieces_.push_back({0.0, kInf, std::move(right)});
  return m;
}

double WeightedMeasure::density(double t) const {
  // Left-closed at the split: the first piece owns t = 0.
  for (const Piece& p : pieces_)
    if (t <= p.hi) return p.density.eval(t);
  return pieces_.back().density.eval(t);
}

double WeightedMeasure::integrate(const ScalarFn& g, double a, double b) const {
  if (b < a) throw ContractError("measure integral needs a <= b");
  double sum = 0.0;
  for (const Piece& p : pieces_) {
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (!(lo < hi)) continue;
    const Expr& rho = p.density;
    auto integrand = [&](double t) {
      const double r = rho.eval(t);
      if (r < 0.0)
        throw NumericalError("measure '" + name_ + "' has negative density " + format_real(r) + " at t = " +
                             format_real(t));
      return g(t) * r;
    };
    sum += papdyn::integrate(integrand, lo, hi);
  }
  return sum;
}

double WeightedMeasure::mass(double a, double b) const {
  if (b < a) throw ContractError("mass needs a <= b");
  double sum = 0.0;
  for (const Piece& p : pieces_) {
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (!(lo < hi)) continue;
    if (p.density.is_constant()) {
      const double r = p.density.eval(0.0);
      if (r < 0.0) throw NumericalError("measure '" + name_ + "' has negative constant density");
      sum += r * (hi - lo);
    } else {
      WeightedMeasure single;
      single.name_ = name_;
      single.pieces_ = {p};
      sum += single.integrate([](double) { return 1.0; }, lo, hi);
    }
  }
  return sum;
}

double ergodic_remainder(const ScalarFn& f, const WeightedMeasure& mu, const WeightedMeasure& nu, double z,
                         double domain_lo) {
  if (!(z > 0.0)) throw ContractError("ergodic remainder needs z > 0");
  const double denom = nu.mass(-z, z);
  if (!(denom > 0.0)) throw NumericalError("measure '" + nu.name() + "' has zero mass on [-z, z]");
  const double lo = std::max(-z, domain_lo);
  if (!(lo < z)) return 0.0;
  return mu.integrate([&f](double t) { return std::abs(f(t)); }, lo, z) / denom;
}

double ergodic_remainder(const SignalExpr& f, const WeightedMeasure& mu, const WeightedMeasure& nu, double z) {
  return ergodic_remainder([&f](double t) { return f.eval(t); }, mu, nu, z, f.domain_floor());
}

ErgodicVerdict ergodicity_trend(const ScalarFn& f, const WeightedMeasure& mu, const WeightedMeasure& nu,
                                const std::vector<double>& z_schedule, double threshold, double domain_lo) {
  if (z_schedule.size() < 4) throw ContractError("ergodicity trend needs at least 4 z values");
  for (std::size_t k = 1; k < z_schedule.size(); ++k)
    if (!(z_schedule[k] > z_schedule[k - 1])) throw ContractError("z schedule must be strictly increasing");

  ErgodicVerdict v;
  v.z_values = z_schedule;
  v.threshold = threshold;
  v.domain_lo = domain_lo;
  for (double z : z_schedule) v.remainders.push_back(ergodic_remainder(f, mu, nu, z, domain_lo));

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < z_schedule.size(); ++k) {
    if (v.remainders[k] > 0.0) {
      lx.push_back(std::log(z_schedule[k]));
      ly.push_back(std::log(v.remainders[k]));
    }
  }
  if (v.remainders.back() == 0.0) {
    // Identically zero on the schedule.
    v.trend_slope = 0.0;
    v.passed = true;
    return v;
  }
  v.trend_slope = lx.size() >= 2 ? theil_sen_slope(lx, ly) : 0.0;
  v.passed = v.remainders.back() < threshold && v.trend_slope < 0.0;
  return v;
}

ErgodicVerdict ergodicity_trend(const SignalExpr& f, const WeightedMeasure& mu, const WeightedMeasure& nu,
                                const std::vector<double>& z_schedule, double threshold) {
  return ergodicity_trend([&f](double t) { return f.eval(t); }, mu, nu, z_schedule, threshold, f.domain_floor());
}

M1Result check_m1(const WeightedMeasure& m, const std::vector<double>& shifts, Interval excluded,
                  const M1Options& opts) {
  if (shifts.empty()) throw ContractError("check_m1 needs at least one shift");
  const bool has_excluded = excluded.lo < excluded.hi;
  std::vector<double> points;
  const auto count = static_cast<std::size_t>(std::llround(2 * opts.sample_radius / opts.sample_step));
  for (std::size_t k = 0; k <= count; ++k) points.push_back(-opts.sample_radius + static_cast<double>(k) * opts.sample_step);
  for (const auto& p : m.pieces())
    for (double edge : {p.lo, p.hi})
      if (std::isfinite(edge))
        for (double eps : {-1e-9, 0.0, 1e-9}) points.push_back(edge + eps);

  M1Result r;
  for (double tau : shifts) {
    for (double t : points) {
      if (has_excluded && t >= excluded.lo && t <= excluded.hi) continue;
      const double num = m.density(t + tau);
      const double den = m.density(t);
      if (den <= 0.0) {
        if (num > 0.0) {
          r.beta_bound = kInf;
          r.passed = false;
          r.detail = "density vanishes at t = " + format_real(t) + " while rho(t + " + format_real(tau) + ") > 0";
          return r;
        }
        continue;
      }
      r.beta_bound = std::max(r.beta_bound, num / den);
    }
  }
  r.passed = std::isfinite(r.beta_bound) && r.beta_bound < 1e12;
  r.detail = "sampled sup of rho(t + tau) / rho(t) over |t| <= " + format_real(opts.sample_radius) + " for " +
             std::to_string(shifts.size()) + " shift(s)";
  return r;
}

M2Result check_m2(const WeightedMeasure& mu, const WeightedMeasure& nu, const std::vector<double>& radii,
                  double slope_tol) {
  if (radii.size() < 3) throw ContractError("check_m2 needs at least 3 radii");
  M2Result r;
  r.radii = radii;
  std::vector<double> lx;
  std::vector<double> ly;
  for (double rad : radii) {
    const double den = nu.mass(-rad, rad);
    if (!(den > 0.0)) throw NumericalError("measure '" + nu.name() + "' has zero mass on [-r, r]");
    const double ratio = mu.mass(-rad, rad) / den;
    r.ratios.push_back(ratio);
    r.sup_ratio = std::max(r.sup_ratio, ratio);
    lx.push_back(std::log(rad));
    ly.push_back(std::log(std::max(ratio, 1e-300)));
  }
  r.slope = theil_sen_slope(lx, ly);
  r.passed = std::isfinite(r.sup_ratio) && r.slope <= slope_tol;
  return r;
}

MeasureClassResult check_measure_class(const WeightedMeasure& m, const std::vector<double>& radii, double min_growth) {
  MeasureClassResult r;
  std::vector<double> lx;
  std::vector<double> ly;
  for (double rad : radii) {
    const double mass = m.mass(-rad, rad);
    r.masses.push_back(mass);
    lx.push_back(std::log(rad));
    ly.push_back(std::log(std::max(mass, 1e-300)));
  }
  r.growth_slope = theil_sen_slope(lx, ly);
  r.infinite_mass = r.growth_slope >= min_growth;
  return r;
}

}  // namespace papdyn
