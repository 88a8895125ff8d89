#include "papdyn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "papdyn/error.hpp"

namespace papdyn {

namespace {

struct Adaptive {
  const ScalarFn& f;
  int max_depth;

  double refine(double a, double fa, double m, double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) return left + right + delta / 15.0;
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double integrate(const ScalarFn& f, double a, double b, const QuadratureOptions& opts) {
  if (b < a) return -integrate(f, b, a, opts);
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) throw ContractError("integrate needs a finite interval");

  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / opts.panel_width)));
  const double width = (b - a) / static_cast<double>(panels);

  // Coarse pass: per-panel Simpson estimates and the scale for the tolerance.
  struct Panel {
    double a, fa, m, fm, b, fb, whole;
  };
  std::vector<Panel> coarse(panels);
  double magnitude = 0.0;
  double f_left = f(a);
  for (std::size_t k = 0; k < panels; ++k) {
    Panel& p = coarse[k];
    p.a = a + static_cast<double>(k) * width;
    p.b = k + 1 == panels ? b : a + static_cast<double>(k + 1) * width;
    p.m = 0.5 * (p.a + p.b);
    p.fa = f_left;
    p.fm = f(p.m);
    p.fb = f(p.b);
    f_left = p.fb;
    p.whole = (p.b - p.a) / 6.0 * (p.fa + 4.0 * p.fm + p.fb);
    magnitude += (p.b - p.a) / 6.0 * (std::abs(p.fa) + 4.0 * std::abs(p.fm) + std::abs(p.fb));
  }

  const double total_tol = std::max(opts.rel_tol * magnitude, opts.abs_tol);
  Adaptive adaptive{f, opts.max_depth};
  double sum = 0.0;
  for (const Panel& p : coarse) {
    const double tol = total_tol * (p.b - p.a) / (b - a);
    sum += adaptive.refine(p.a, p.fa, p.m, p.fm, p.b, p.fb, p.whole, tol, 0);
  }
  if (!std::isfinite(sum)) throw NumericalError("quadrature produced a non-finite value");
  return sum;
}

double theil_sen_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("theil_sen_slope needs >= 2 paired points");
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
  if (slopes.empty()) throw ContractError("theil_sen_slope needs distinct abscissae");
  std::sort(slopes.begin(), slopes.end());
  const std::size_t mid = slopes.size() / 2;
  return slopes.size() % 2 ? slopes[mid] : 0.5 * (slopes[mid - 1] + slopes[mid]);
}

}  // namespace papdyn
