#include <cmath>
#include <random>

#include "doctest.h"

#include "papdyn/activation.hpp"
#include "papdyn/error.hpp"
#include "papdyn/expr.hpp"
#include "papdyn/signal.hpp"

using namespace papdyn;

namespace {

const double kPi = std::acos(-1.0);

SignalExpr random_signal(std::mt19937& rng, bool with_exp_decay) {
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::uniform_real_distribution<double> freq(0.1, 3.0);
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  std::uniform_int_distribution<int> count(0, 3);
  std::vector<ApTerm> ap;
  ap.push_back({amp(rng), ApKind::Const, 0.0, 0.0});
  for (int k = count(rng); k > 0; --k) ap.push_back({amp(rng), k % 2 ? ApKind::Sin : ApKind::Cos, freq(rng), phase(rng)});
  std::vector<ErgTerm> erg;
  erg.push_back({amp(rng), ErgKind::ExpAbsDecay});
  erg.push_back({amp(rng), ErgKind::RationalDecay});
  if (with_exp_decay) erg.push_back({amp(rng), ErgKind::ExpDecay});
  return SignalExpr(ap, erg, 1.0 + std::abs(amp(rng)));
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("grammar evaluates functions, constants and precedence") {
    CHECK(Expr::parse("1 + 2*3").eval(0.0) == doctest::Approx(7.0));
  }

  TEST_CASE("pi and nested functions") {
    CHECK(Expr::parse("sin(pi/2)").eval(0.0) == doctest::Approx(1.0));
    CHECK(Expr::parse("sqrt(abs(-4)) * exp(0)").eval(0.0) == doctest::Approx(2.0));
    CHECK(Expr::parse("cos(t) / (1 + t*t)").eval(1.0) == doctest::Approx(std::cos(1.0) / 2.0));
  }

  TEST_CASE("syntax errors carry a column") {
    try {
      Expr::parse("sin(t + )");
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
    CHECK_THROWS_AS(Expr::parse("tan(t)"), ConfigError);
    CHECK_THROWS_AS(Expr::parse("(1 + t"), ConfigError);
    CHECK_THROWS_AS(Expr::parse(""), ConfigError);
  }
}

TEST_SUITE("signal") {
  TEST_CASE("frozen evaluation of (2 sin t + e^-t)/10 at pi/2") {
    const SignalExpr s = SignalExpr::parse("(2*sin(t)+exp(-t))/10");
    CHECK(s.eval(kPi / 2) == doctest::Approx(0.2207879576350762).epsilon(1e-15));
    CHECK(s.scale() == 10.0);
    REQUIRE(s.erg_terms().size() == 1);
    CHECK(s.erg_terms()[0].kind == ErgKind::ExpDecay);
  }

  TEST_CASE("structured parse of the supported shapes") {
    const SignalExpr s = SignalExpr::parse("8*cos(sqrt(5)*t)/10");
    REQUIRE(s.ap_terms().size() == 1);
    CHECK(s.ap_terms()[0].kind == ApKind::Cos);
    CHECK(s.ap_terms()[0].frequency == doctest::Approx(std::sqrt(5.0)));
    CHECK(s.eval(0.3) == doctest::Approx(0.8 * std::cos(std::sqrt(5.0) * 0.3)));

    const SignalExpr r = SignalExpr::parse("3/(1+t*t) + exp(-abs(t))");
    CHECK(r.eval(2.0) == doctest::Approx(3.0 / 5.0 + std::exp(-2.0)));
    CHECK_FALSE(r.has_ap());
  }

  TEST_CASE("shapes outside AP + ergodic are rejected") {
    CHECK_THROWS_AS(SignalExpr::parse("t"), ConfigError);
    CHECK_THROWS_AS(SignalExpr::parse("sin(t*t)"), ConfigError);
    CHECK_THROWS_AS(SignalExpr::parse("exp(t)"), ConfigError);
    CHECK_THROWS_AS(SignalExpr::parse("1/t"), ConfigError);
    CHECK_THROWS_AS(SignalExpr::parse("exp(sin(t))"), ConfigError);
  }

  TEST_CASE("one-sided terms raise a domain error below the floor") {
    const SignalExpr s = SignalExpr::parse("exp(-t)");
    CHECK(s.domain_floor() == 0.0);
    CHECK_THROWS_AS(s.eval(-0.5), DomainError);
    CHECK_THROWS_AS(sup_abs_bound(s, -1.0), DomainError);
    CHECK_THROWS_AS(sup_abs_bound(s, -kInf), UnboundedError);
    CHECK(sup_abs_bound(s, 0.0) == doctest::Approx(1.0));
    CHECK(SignalExpr::parse("exp(-abs(t))").domain_floor() == -kInf);
  }

  TEST_CASE("amplitude-sum bounds are exact rationals on the example rows") {
    CHECK(sup_abs_bound(SignalExpr::parse("(2*sin(t)+exp(-t))/10"), 0.0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(sup_abs_bound(SignalExpr::parse("(4*cos(t)+exp(-t))/10"), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(inf_on(SignalExpr::constant(2.0), 0.0) == 2.0);
  }

  TEST_CASE("property: sampled values never exceed the certified bounds") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const SignalExpr s = random_signal(rng, trial % 2 == 0);
      const double floor = std::max(s.domain_floor(), -50.0);
      const double hi = sup_abs_bound(s, floor);
      const double lo = inf_on(s, floor);
      for (int k = 0; k <= 2000; ++k) {
        const double t = floor + 0.05 * k;
        const double v = s.eval(t);
        CHECK(std::abs(v) <= hi + 1e-12);
        CHECK(v >= lo - 1e-12);
      }
    }
  }

  TEST_CASE("property: refined bounds bracket the sampled estimate") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const SignalExpr s = random_signal(rng, true);
      const RefinedBound sup = sup_abs_refined(s, 0.0, 50.0, 5001);
      CHECK(sup.sampled <= sup.bound + 1e-12);
      const RefinedBound inf = inf_refined(s, 0.0, 50.0, 5001);
      CHECK(inf.sampled >= inf.bound - 1e-12);
    }
  }

  TEST_CASE("property: decomposition is lossless") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
      const SignalExpr s = random_signal(rng, true);
      const auto [ap, erg] = decompose(s);
      CHECK_FALSE(erg.has_ap());
      CHECK_FALSE(ap.has_erg());
      for (double t : {0.0, 0.7, 3.0, 40.0}) CHECK(ap.eval(t) + erg.eval(t) == doctest::Approx(s.eval(t)).epsilon(1e-13));
    }
  }

  TEST_CASE("property: canonical text re-parses to the same structure") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const SignalExpr s = random_signal(rng, trial % 3 == 0);
      CHECK(SignalExpr::parse(s.to_string()) == s);
    }
  }

  TEST_CASE("property: translation by near-periods moves the AP part by at most the predicted amount") {
    // f(t) = sin t + cos(sqrt(2) t). For tau = 2 pi m with m from the Pell
    // sequence, sqrt(2) m lies within |sqrt(2) m - k| of an integer k.
    const SignalExpr f = SignalExpr::parse("sin(t) + cos(sqrt(2)*t)");
    for (double m : {12.0, 70.0, 408.0}) {
      const double tau = 2 * kPi * m;
      const double miss = std::abs(std::sqrt(2.0) * m - std::round(std::sqrt(2.0) * m));
      const double predicted = 2 * kPi * miss + 1e-9;
      double worst = 0.0;
      for (int k = 0; k <= 4000; ++k) {
        const double t = -100.0 + 0.05 * k;
        worst = std::max(worst, std::abs(f.eval(t + tau) - f.eval(t)));
      }
      CHECK(worst <= predicted);
    }
  }

  TEST_CASE("scaling multiplies values and bounds") {
    const SignalExpr s = SignalExpr::parse("(2*sin(t)+exp(-t))/10");
    const SignalExpr s2 = s.scaled(2.0);
    CHECK(s2.eval(1.3) == doctest::Approx(2 * s.eval(1.3)));
    CHECK(sup_abs_bound(s2, 0.0) == doctest::Approx(0.6).epsilon(1e-15));
  }
}

TEST_SUITE("activation") {
  TEST_CASE("intrinsic constants of the built-in shapes") {
    CHECK(ActivationSpec::sine().lipschitz_const() == 1.0);
    CHECK(ActivationSpec::sine().bound_const() == 1.0);
    CHECK(ActivationSpec::tanh()(0.0) == 0.0);
    CHECK(ActivationSpec::saturation()(5.0) == 1.0);
    CHECK(ActivationSpec::saturation()(-0.25) == -0.25);
  }

  TEST_CASE("table activation") {
    const ActivationSpec t = ActivationSpec::table({-2.0, 0.0, 1.0}, {-1.0, 0.0, 3.0});
    CHECK(t(0.5) == doctest::Approx(1.5));
    CHECK(t(10.0) == 3.0);
    CHECK(t(-10.0) == -1.0);
    CHECK(t.lipschitz_const() == doctest::Approx(3.0));
    CHECK(t.bound_const() == doctest::Approx(3.0));
    CHECK_THROWS_AS(ActivationSpec::table({-1.0, 1.0}, {0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(ActivationSpec::table({0.0, 0.0}, {0.0, 1.0}), ConfigError);
  }

  TEST_CASE("declared constants may be looser, never tighter") {
    CHECK(ActivationSpec::sine().with_constants(2.0, 1.5).lipschitz_const() == 2.0);
    CHECK_THROWS_AS(ActivationSpec::sine().with_constants(0.5, 1.0), ConfigError);
    CHECK(shape_from_name(shape_name(ActivationShape::Saturation)) == ActivationShape::Saturation);
    CHECK_THROWS_AS(shape_from_name("relu"), ConfigError);
  }

  TEST_CASE("property: sampled audit agrees with the declared constants") {
    for (const ActivationSpec& a : {ActivationSpec::sine(), ActivationSpec::tanh(), ActivationSpec::saturation(),
                                    ActivationSpec::table({-3.0, -1.0, 0.0, 2.0}, {1.0, -2.0, 0.0, 0.5})}) {
      const ActivationAudit audit = audit_activation(a);
      CHECK(audit.vanishes_at_zero);
      CHECK(audit.max_quotient <= a.lipschitz_const() + 1e-12);
      CHECK(audit.max_abs <= a.bound_const() + 1e-12);
      CHECK(audit.passed);
    }
  }
}
