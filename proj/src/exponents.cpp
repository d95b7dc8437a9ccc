#include "weightlab/exponents.hpp"

#include <cmath>
#include <numeric>

#include "weightlab/errors.hpp"

namespace weightlab {

double conjugate(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError("exponent must lie in (1, inf)");
  return p / (p - 1.0);
}

ExponentVector::ExponentVector(std::vector<double> p_list) : p_list_(std::move(p_list)) {
  if (p_list_.empty()) throw ArityError("exponent vector needs at least one entry");
  double inv = 0.0;
  for (double pi : p_list_) {
    conj_list_.push_back(conjugate(pi));
    inv += 1.0 / pi;
  }
  p_ = 1.0 / inv;
}

double ExponentVector::identity_residual() const {
  double total = 1.0 / p_;
  for (double c : conj_list_) total += 1.0 / c;
  return std::abs(total - static_cast<double>(m()));
}

}  // namespace weightlab
