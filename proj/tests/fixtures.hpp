#pragma once

#include <string>

#include "papdyn/activation.hpp"
#include "papdyn/config.hpp"
#include "papdyn/netmodel.hpp"

namespace fixtures {

inline std::string config_path(const std::string& name) { return std::string(PAPDYN_CONFIG_DIR) + "/" + name; }

inline papdyn::RunConfig example_4_1() { return papdyn::load_config(config_path("example_4_1.json")); }

/// Identity on [-100, 100], constant outside.
inline papdyn::ActivationSpec identity() { return papdyn::ActivationSpec::table({-100.0, 0.0, 100.0}, {-100.0, 0.0, 100.0}); }

/// x'(t) = -c x(t) + a x(t - tau), scalar, linear within [-100, 100].
inline papdyn::NetModel linear_scalar(double c, double a, double tau, double history) {
  papdyn::NetModel m = papdyn::NetModel::zeros(1);
  m.c[0] = papdyn::SignalExpr::constant(c);
  m.a[0] = papdyn::SignalExpr::constant(a);
  m.tau[0] = tau;
  m.f[0] = m.g[0] = m.h[0] = identity();
  m.history = papdyn::History::constant({history});
  return m;
}

/// x'(t) = -2 x(t) + sin(x(t - 1)); decay function 2 - w - e^w.
inline papdyn::NetModel toy_scalar() {
  papdyn::NetModel m = papdyn::NetModel::zeros(1);
  m.c[0] = papdyn::SignalExpr::constant(2.0);
  m.a[0] = papdyn::SignalExpr::constant(1.0);
  return m;
}

}  // namespace fixtures
