#include <cmath>
#include <sstream>

#include "doctest.h"

#include "fixtures.hpp"
#include "papdyn/dde.hpp"
#include "papdyn/error.hpp"

using namespace papdyn;

namespace {

// x' = -x(t - 1), x = 1 on [-1, 0]: x(t) = 1 - t on [0, 1] and
// x(t) = -(2(t - 1) - (t*t - 1)/2) on [1, 2].
double steps_solution(double t) {
  if (t <= 0.0) return 1.0;
  if (t <= 1.0) return 1.0 - t;
  return -(2.0 * (t - 1.0) - (t * t - 1.0) / 2.0);
}

}  // namespace

TEST_SUITE("dde") {
  TEST_CASE("method of steps oracle at t = 2") {
    const NetModel m = fixtures::linear_scalar(0.0, -1.0, 1.0, 1.0);
    const Trajectory traj = integrate(m, 2.0, 1e-3);
    CHECK(std::abs(traj.sample(2.0, 0) - (-0.5)) <= 1e-6);
    for (double t : {0.25, 0.5, 1.0, 1.5, 1.9}) CHECK(std::abs(traj.sample(t, 0) - steps_solution(t)) <= 1e-6);
  }

  TEST_CASE("fourth-order convergence under step halving") {
    // Up to t = 4 the solution is a polynomial of degree <= 4 on each unit
    // interval and RK4 reproduces it to roundoff; x(6) = -41/720.
    const NetModel m = fixtures::linear_scalar(0.0, -1.0, 1.0, 1.0);
    const double exact = -41.0 / 720.0;
    CHECK(std::abs(integrate(m, 4.0, 0.1).sample(4.0, 0) - 5.0 / 24.0) < 1e-13);
    const double e1 = std::abs(integrate(m, 6.0, 0.1).sample(6.0, 0) - exact);
    const double e2 = std::abs(integrate(m, 6.0, 0.05).sample(6.0, 0) - exact);
    const double factor = e1 / e2;
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
  }

  TEST_CASE("exponential decay without delay") {
    NetModel m = fixtures::linear_scalar(0.5, 0.0, 1.0, 1.0);
    const Trajectory traj = integrate(m, 4.0, 1e-2);
    CHECK(traj.sample(4.0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
  }

  TEST_CASE("dense output is cubic Hermite between nodes") {
    NetModel m = NetModel::zeros(1);
    m.I[0] = SignalExpr::parse("cos(t)");
    const double h = 0.05;
    const Trajectory traj = integrate(m, 3.0, h);
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < traj.nodes(); ++k) {
      const double t = traj.time(k) + 0.5 * h;
      worst = std::max(worst, std::abs(traj.sample(t, 0) - std::sin(t)));
    }
    CHECK(worst < 1e-6);
    CHECK(traj.sample(traj.time(7), 0) == traj.value(7)[0]);
  }

  TEST_CASE("before t0 the trajectory is its history") {
    const NetModel m = fixtures::linear_scalar(0.0, -1.0, 1.0, 0.25);
    const Trajectory traj = integrate(m, 1.0, 1e-2);
    CHECK(traj.sample(-0.5, 0) == 0.25);
    CHECK_THROWS_AS(traj.sample(-1.5, 0), ContractError);
    CHECK_THROWS_AS(traj.sample(1.5, 0), ContractError);
  }

  TEST_CASE("step larger than the smallest delay is a contract error") {
    const NetModel m = fixtures::linear_scalar(0.0, -1.0, 0.01, 1.0);
    CHECK_THROWS_AS(integrate(m, 1.0, 0.1), ContractError);
  }

  TEST_CASE("divergence is reported as a numerical error") {
    NetModel m = NetModel::zeros(1);
    m.c[0] = SignalExpr::constant(-800.0);
    m.history = History::constant({1.0});
    CHECK_THROWS_AS(integrate(m, 2.0, 1e-2), NumericalError);
  }

  TEST_CASE("zero model stays at zero") {
    NetModel m = NetModel::zeros(2);
    const Trajectory traj = integrate(m, 5.0, 1e-3);
    for (std::size_t k = 0; k < traj.nodes(); k += 100) {
      CHECK(traj.value(k)[0] == 0.0);
      CHECK(traj.value(k)[1] == 0.0);
    }
  }

  TEST_CASE("property: restarting from the computed prefix reproduces the run") {
    const RunConfig cfg = fixtures::example_4_1();
    const double h = 1e-3;
    const Trajectory full = integrate(cfg.model, cfg.model.history, 0.0, 10.0, h);
    const Trajectory first = integrate(cfg.model, cfg.model.history, 0.0, 5.0, h);
    const History prefix = History::function(2, [&first](double t, std::span<double> out) { first.sample(t, out); });
    const Trajectory second = integrate(cfg.model, prefix, 5.0, 10.0, h);
    double worst = 0.0;
    for (std::size_t k = 0; k < second.nodes(); ++k) {
      const double t = second.time(k);
      for (std::size_t c = 0; c < 2; ++c) worst = std::max(worst, std::abs(second.value(k)[c] - full.sample(t, c)));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("CSV header, digits and determinism") {
    const RunConfig cfg = fixtures::example_4_1();
    const Trajectory a = integrate(cfg.model, 1.0, 1e-2);
    const Trajectory b = integrate(cfg.model, 1.0, 1e-2);
    std::ostringstream sa, sb;
    write_csv(a, sa);
    write_csv(b, sb);
    CHECK(sa.str() == sb.str());
    std::istringstream in(sa.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "t,x_1,x_2");
    CHECK(row == "0,0.10000000000000001,0.10000000000000001");
  }
}
