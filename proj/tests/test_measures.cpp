#include <cmath>

#include "doctest.h"

#include "papdyn/error.hpp"
#include "papdyn/measures.hpp"
#include "papdyn/quadrature.hpp"

using namespace papdyn;

namespace {

const double kPi = std::acos(-1.0);
const double kE = std::exp(1.0);

WeightedMeasure rho1() { return WeightedMeasure::from_density("rho1", Expr::parse("exp(sin(t))")); }
WeightedMeasure rho2() { return WeightedMeasure::two_piece("rho2", Expr::parse("exp(t)"), Expr::parse("1")); }

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("polynomials and kinks") {
    CHECK(integrate([](double t) { return t * t * t; }, 0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(integrate([](double t) { return std::abs(std::sin(t)); }, 0.0, 10 * kPi) ==
          doctest::Approx(20.0).epsilon(1e-9));
    CHECK(integrate([](double) { return 1.0; }, 3.0, 3.0) == 0.0);
    CHECK(integrate([](double t) { return t; }, 1.0, -1.0) == doctest::Approx(0.0));
  }

  TEST_CASE("theil-sen recovers an exact slope despite an outlier") {
    std::vector<double> x = {1, 2, 3, 4, 5, 6, 7};
    std::vector<double> y = {2, 4, 6, 8, 100, 12, 14};
    CHECK(theil_sen_slope(x, y) == doctest::Approx(2.0));
  }
}

TEST_SUITE("measures") {
  TEST_CASE("frozen masses of the example weights") {
    CHECK(rho1().mass(-kPi, kPi) == doctest::Approx(7.954926521012846).epsilon(1e-10));
    CHECK(rho2().mass(-1.0, 1.0) == doctest::Approx(1.6321205588285577).epsilon(1e-10));
    CHECK(WeightedMeasure::lebesgue().mass(-3.0, 4.5) == 7.5);
  }

  TEST_CASE("mass of rho1 stays within [2r/e, 2er]") {
    const WeightedMeasure m = rho1();
    for (double r : {1.0, 10.0, 100.0}) {
      const double mass = m.mass(-r, r);
      CHECK(mass >= 2 * r / kE);
      CHECK(mass <= 2 * kE * r);
    }
  }

  TEST_CASE("two-piece density: t = 0 belongs to the left piece") {
    const WeightedMeasure m = WeightedMeasure::two_piece("step", Expr::parse("2"), Expr::parse("5"));
    CHECK(m.density(0.0) == 2.0);
    CHECK(m.density(1e-12) == 5.0);
    CHECK(m.mass(-1.0, 1.0) == doctest::Approx(7.0));
  }

  TEST_CASE("negative densities are a numerical error") {
    const WeightedMeasure m = WeightedMeasure::from_density("bad", Expr::parse("sin(t)"));
    CHECK_THROWS_AS(m.mass(0.0, 10.0), NumericalError);
  }

  TEST_CASE("property: mass is additive and monotone") {
    for (const WeightedMeasure& m : {rho1(), rho2(), WeightedMeasure::lebesgue()}) {
      double prev = 0.0;
      for (double r = 1.0; r <= 64.0; r *= 2.0) {
        const double whole = m.mass(-r, r);
        CHECK(whole == doctest::Approx(m.mass(-r, 0.3) + m.mass(0.3, r)).epsilon(1e-9));
        CHECK(whole > prev);
        prev = whole;
      }
    }
  }

  TEST_CASE("frozen remainder of e^-|t| with Lebesgue measures") {
    const SignalExpr f = SignalExpr::parse("exp(-abs(t))");
    const WeightedMeasure leb = WeightedMeasure::lebesgue();
    CHECK(ergodic_remainder(f, leb, leb, 10.0) == doctest::Approx(0.09999546000702375).epsilon(1e-10));
  }

  TEST_CASE("ergodicity trend: decaying signal passes, |sin t| does not") {
    const WeightedMeasure leb = WeightedMeasure::lebesgue();
    const ErgodicVerdict good = ergodicity_trend(SignalExpr::parse("exp(-abs(t))"), leb, leb);
    CHECK(good.passed);
    CHECK(good.trend_slope == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(good.remainders.back() < 1e-2);

    const ErgodicVerdict bad = ergodicity_trend([](double t) { return std::abs(std::sin(t)); }, leb, leb);
    CHECK_FALSE(bad.passed);
    CHECK(bad.remainders.back() == doctest::Approx(2.0 / kPi).epsilon(0.02));

    const ErgodicVerdict zero = ergodicity_trend(SignalExpr{}, leb, leb);
    CHECK(zero.passed);
  }

  TEST_CASE("one-sided signals are integrated over their domain") {
    const WeightedMeasure leb = WeightedMeasure::lebesgue();
    const SignalExpr f = SignalExpr::parse("exp(-t)");
    CHECK(ergodic_remainder(f, leb, leb, 10.0) == doctest::Approx((1 - std::exp(-10.0)) / 20.0).epsilon(1e-10));
    CHECK(ergodicity_trend(SignalExpr::parse("exp(-t)/10"), rho1(), rho2()).passed);
  }

  TEST_CASE("translation condition on the example weights") {
    const std::vector<double> shifts = {0.5, 1.0, 2.0, 3.14159, 5.0, 10.0};
    const M1Result r1 = check_m1(rho1(), shifts);
    CHECK(r1.passed);
    CHECK(r1.beta_bound <= std::exp(2.0) + 1e-12);
    CHECK(check_m1(rho2(), shifts).passed);
    const WeightedMeasure gauss = WeightedMeasure::from_density("gauss", Expr::parse("exp(-t*t)"));
    CHECK_FALSE(check_m1(gauss, shifts).passed);
  }

  TEST_CASE("ratio condition") {
    const M2Result r = check_m2(rho1(), rho2());
    CHECK(r.passed);
    CHECK(r.slope < 0.05);
    const WeightedMeasure grow = WeightedMeasure::from_density("grow", Expr::parse("1 + t*t"));
    CHECK_FALSE(check_m2(grow, WeightedMeasure::lebesgue()).passed);
  }

  TEST_CASE("measure class: infinite total mass") {
    CHECK(check_measure_class(rho1()).infinite_mass);
    CHECK(check_measure_class(rho2()).infinite_mass);
    const WeightedMeasure finite = WeightedMeasure::from_density("finite", Expr::parse("exp(-abs(t))"));
    CHECK_FALSE(check_measure_class(finite).infinite_mass);
  }
}

TEST_SUITE("closure") {
  // y = y1 + y2 and z = z1 + z2 with AP parts y1, z1 and ergodic parts y2, z2.
  // The ergodic part of y z is y1 z2 + y2 z1 + y2 z2 and its remainder is
  // bounded by |y1| R(z2) + |z1| R(y2) + |y2| R(z2).
  TEST_CASE("property: products stay pseudo almost periodic") {
    const SignalExpr y = SignalExpr::parse("(2*sin(t) + exp(-t))/10");
    const SignalExpr z = SignalExpr::parse("(4*cos(t) + exp(-t))/10");
    const auto [y1, y2] = decompose(y);
    const auto [z1, z2] = decompose(z);
    const double y1_sup = sup_abs_bound(y1, 0.0);
    const double z1_sup = sup_abs_bound(z1, 0.0);
    const double y2_sup = sup_abs_bound(y2, 0.0);
    const auto erg = [&](double t) { return y1.eval(t) * z2.eval(t) + y2.eval(t) * z1.eval(t) + y2.eval(t) * z2.eval(t); };
    const auto ap = [&](double t) { return y1.eval(t) * z1.eval(t); };

    for (double t : {0.0, 0.5, 3.0, 17.0}) CHECK(ap(t) + erg(t) == doctest::Approx(y.eval(t) * z.eval(t)));

    const WeightedMeasure mu = rho1();
    const WeightedMeasure nu = rho2();
    for (double zv : kDefaultZSchedule) {
      const double r = ergodic_remainder(erg, mu, nu, zv, 0.0);
      const double bound = y1_sup * ergodic_remainder(z2, mu, nu, zv) + z1_sup * ergodic_remainder(y2, mu, nu, zv) +
                           y2_sup * ergodic_remainder(z2, mu, nu, zv);
      CHECK(r <= bound * (1 + 1e-9));
    }
    CHECK(ergodicity_trend(erg, mu, nu, kDefaultZSchedule, 1e-2, 0.0).passed);
  }

  // Lambda(s, x) = L(s) sin(x) with L(s) = 1 + e^{-|s|} is Lipschitz in x with
  // constant L(s). Composed with y(s - theta) its ergodic part is
  // Lambda(s, y(s - theta)) - Lambda(s, y1(s - theta)), which is bounded by
  // L(s) |y2(s - theta)|; Hoelder splits the integral into p and q norms.
  TEST_CASE("property: compositions with a delayed argument stay pseudo almost periodic") {
    const SignalExpr y = SignalExpr::parse("(sin(sqrt(2)*t) + exp(-t))/10");
    const auto [y1, y2] = decompose(y);
    const double theta = 1.0;
    const auto lip = [](double s) { return 1.0 + std::exp(-std::abs(s)); };
    const auto erg = [&](double s) {
      return lip(s) * (std::sin(y.eval(s - theta)) - std::sin(y1.eval(s - theta)));
    };
    const WeightedMeasure mu = rho1();
    const WeightedMeasure nu = rho2();
    const double p = 2.0, q = 2.0;
    for (double zv : kDefaultZSchedule) {
      const double lo = theta;  // y2(s - theta) needs s - theta >= 0
      const double lhs = mu.integrate([&](double s) { return std::abs(erg(s)); }, lo, zv);
      const double lp = std::pow(mu.integrate([&](double s) { return std::pow(lip(s), p); }, lo, zv), 1 / p);
      const double yq =
          std::pow(mu.integrate([&](double s) { return std::pow(std::abs(y2.eval(s - theta)), q); }, lo, zv), 1 / q);
      CHECK(lhs <= lp * yq * (1 + 1e-9));
      CHECK(lhs / nu.mass(-zv, zv) <= 2.0 * ergodic_remainder([&](double s) { return y2.eval(s - theta); }, mu, nu, zv, lo) *
                                          (1 + 1e-9));
    }
    CHECK(ergodicity_trend(erg, mu, nu, kDefaultZSchedule, 1e-2, theta).passed);
  }
}
