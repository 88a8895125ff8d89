#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "papdyn/measures.hpp"
#include "papdyn/netmodel.hpp"

namespace papdyn {

enum class StabilityMode { Pairs, Picard };

/// Every tunable with its default. Config documents override individual
/// entries; the CLI flags --step and --tol override `step` and `tol`.
///
///   step              1e-3      integrator step
///   picard_step       1e-2      Picard candidate grid (quadrature at step/4)
///   tol               1e-8      Picard stopping tolerance
///   eps_tail          1e-10     truncated kernel mass
///   max_iter          1000      Picard iteration cap
///   picard_window     [-40, 40] working window, moved right if coefficients
///                               cannot be evaluated at its left margin
///   t_end             50        simulate horizon
///   horizon           20        stability envelope horizon
///   safety            0.99      lambda = safety * min(eta, min c*)
///   stability_mode    pairs     pairs | picard
///   pairs             5         random history pairs
///   seed              1
///   amplitude         1         random history amplitude
///   z_schedule        5..160    ergodic remainders (doubling)
///   ergodic_threshold 1e-2
///   m1_shifts         0.5, 1, 2, 3.14159, 5, 10
///   m1_excluded       [0, 0]    empty interval
///   radii             10..160   step 10
///   m2_slope_tol      0.05
///   p                 2         exponent of the weight-function variant
struct Settings {
  double step = 1e-3;
  double picard_step = 1e-2;
  double tol = 1e-8;
  double eps_tail = 1e-10;
  int max_iter = 1000;
  double picard_lo = -40.0;
  double picard_hi = 40.0;
  double t_end = 50.0;
  double horizon = 20.0;
  double safety = 0.99;
  StabilityMode stability_mode = StabilityMode::Pairs;
  int pairs = 5;
  unsigned seed = 1;
  double amplitude = 1.0;
  std::vector<double> z_schedule = kDefaultZSchedule;
  double ergodic_threshold = 1e-2;
  std::vector<double> m1_shifts = {0.5, 1.0, 2.0, 3.14159, 5.0, 10.0};
  double m1_excluded_lo = 0.0;
  double m1_excluded_hi = 0.0;
  std::vector<double> radii = kDefaultRadii;
  double m2_slope_tol = 0.05;
  double p_exponent = 2.0;

  friend bool operator==(const Settings&, const Settings&) = default;
};

struct RunConfig {
  std::string name;
  NetModel model;
  WeightedMeasure mu;
  WeightedMeasure nu;
  double exp_floor = SignalExpr::kDefaultExpFloor;
  Settings settings;

  HypothesisOptions hypothesis_options() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a JSON config document. Throws ConfigError with a
/// line/column (syntax) or field path (content) diagnostic.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Writes a config document that parses back to an equal RunConfig.
std::string emit_config(const RunConfig& config);

}  // namespace papdyn
