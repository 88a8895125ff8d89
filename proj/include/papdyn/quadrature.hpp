#pragma once

#include <functional>
#include <span>

namespace papdyn {

using ScalarFn = std::function<double(double)>;

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  double panel_width = 1.0;  // [a,b] is cut into panels no wider than this
  int max_depth = 40;
};

/// Integral of f over [a, b]: fixed panels, each refined by adaptive Simpson
/// with Richardson correction. Panels are summed left to right, so results
/// are reproducible bit for bit.
double integrate(const ScalarFn& f, double a, double b, const QuadratureOptions& opts = {});

/// Theil-Sen estimator: median of pairwise slopes.
double theil_sen_slope(std::span<const double> x, std::span<const double> y);

}  // namespace papdyn
