#include "papdyn/history.hpp"

#include <algorithm>
#include <cmath>

#include "papdyn/error.hpp"

namespace papdyn {

UniformTable::UniformTable(double t0, double step, std::size_t dim, std::vector<double> values)
    : t0_(t0), step_(step), dim_(dim), values_(std::move(values)) {
  if (!(step_ > 0.0)) throw ContractError("table step must be positive");
  if (dim_ == 0 || values_.size() % dim_ != 0 || values_.size() / dim_ < 2)
    throw ContractError("table needs at least two nodes of the declared dimension");
}

double UniformTable::sample(double t, std::size_t c, bool clamp) const {
  const std::size_t count = nodes();
  const double pos = (t - t0_) / step_;
  const double last = static_cast<double>(count - 1);
  if (pos < -1e-9 || pos > last + 1e-9) {
    if (!clamp)
      throw ContractError("table lookup at t = " + format_real(t) + " outside [" + format_real(t0_) + ", " +
                          format_real(t_end()) + "]");
    return at(pos < 0 ? 0 : count - 1, c);
  }
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-9) return at(static_cast<std::size_t>(std::clamp(nearest, 0.0, last)), c);
  if (count < 4) {
    const auto k = static_cast<std::size_t>(std::floor(pos));
    const double w = pos - static_cast<double>(k);
    return (1 - w) * at(k, c) + w * at(k + 1, c);
  }
  // Four-node stencil around the cell, shifted inward at the edges.
  auto base = static_cast<std::ptrdiff_t>(std::floor(pos)) - 1;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(count) - 4);
  const double x = pos - static_cast<double>(base);  // stencil nodes at 0, 1, 2, 3
  const double l0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double l1 = x * (x - 2) * (x - 3) / 2.0;
  const double l2 = -x * (x - 1) * (x - 3) / 2.0;
  const double l3 = x * (x - 1) * (x - 2) / 6.0;
  const auto b = static_cast<std::size_t>(base);
  return l0 * at(b, c) + l1 * at(b + 1, c) + l2 * at(b + 2, c) + l3 * at(b + 3, c);
}

void UniformTable::sample(double t, std::span<double> out, bool clamp) const {
  for (std::size_t c = 0; c < dim_; ++c) out[c] = sample(t, c, clamp);
}

History History::constant(std::vector<double> values) {
  History h;
  h.kind_ = Kind::Constant;
  h.dim_ = values.size();
  h.constant_ = std::move(values);
  return h;
}

History History::expressions(std::vector<Expr> components) {
  History h;
  h.kind_ = Kind::Expressions;
  h.dim_ = components.size();
  h.exprs_ = std::move(components);
  return h;
}

History History::table(UniformTable table) {
  History h;
  h.kind_ = Kind::Table;
  h.dim_ = table.dim();
  h.table_ = std::make_shared<const UniformTable>(std::move(table));
  return h;
}

History History::function(std::size_t dim, Fn fn) {
  History h;
  h.kind_ = Kind::Function;
  h.dim_ = dim;
  h.fn_ = std::move(fn);
  return h;
}

void History::value(double t, std::span<double> out) const {
  switch (kind_) {
    case Kind::Constant:
      std::copy(constant_.begin(), constant_.end(), out.begin());
      return;
    case Kind::Expressions:
      for (std::size_t i = 0; i < dim_; ++i) out[i] = exprs_[i].eval(t);
      return;
    case Kind::Table:
      table_->sample(t, out);
      return;
    case Kind::Function:
      fn_(t, out);
      return;
  }
}

std::vector<double> History::value(double t) const {
  std::vector<double> out(dim_);
  value(t, out);
  return out;
}

bool operator==(const History& a, const History& b) {
  if (a.kind_ != b.kind_ || a.dim_ != b.dim_) return false;
  switch (a.kind_) {
    case History::Kind::Constant:
      return a.constant_ == b.constant_;
    case History::Kind::Expressions:
      return a.exprs_ == b.exprs_;
    case History::Kind::Table:
      return a.table_ == b.table_ ||
             (a.table_->t0() == b.table_->t0() && a.table_->step() == b.table_->step() &&
              a.table_->values() == b.table_->values());
    case History::Kind::Function:
      return false;
  }
  return false;
}

double history_sup_distance(const History& a, const History& b, double lo, double hi, double step) {
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> va(a.dim());
  std::vector<double> vb(b.dim());
  double sup = 0.0;
  for (std::size_t k = 0; k <= count; ++k) {
    const double t = std::min(hi, lo + static_cast<double>(k) * step);
    a.value(t, va);
    b.value(t, vb);
    for (std::size_t i = 0; i < va.size(); ++i) sup = std::max(sup, std::abs(va[i] - vb[i]));
  }
  return sup;
}

}  // namespace papdyn
