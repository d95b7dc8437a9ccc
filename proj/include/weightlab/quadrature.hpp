#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "weightlab/errors.hpp"
#include "weightlab/weight_spec.hpp"

namespace weightlab {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  int max_depth = 60;
  bool split_singularities = true;

  // Throws PreconditionError unless rel_tol is in (0, 1e-3] and max_depth >= 10.
  void validate() const;
  bool operator==(const QuadratureConfig&) const = default;
};

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole, double eps, double floor,
                    int depth, const QuadratureConfig& quad) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // A few forced levels keep a lucky first estimate from ending the search.
  if (depth >= 3 && std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (depth >= quad.max_depth) throw QuadratureError("adaptive quadrature did not reach the requested tolerance");
  const double half = std::max(0.5 * eps, floor);
  return simpson_step(f, a, m, fa, flm, fm, left, half, floor, depth + 1, quad) +
         simpson_step(f, m, b, fm, frm, fb, right, half, floor, depth + 1, quad);
}

}  // namespace detail

// Recursive adaptive Simpson on [a, b] with a relative tolerance taken from the
// first whole-interval estimate. The per-level absolute budget halves with
// depth but never drops below rel_tol * |estimate| / 1024.
template <class F>
double adaptive_simpson(F&& f, double a, double b, const QuadratureConfig& quad) {
  if (!(a < b)) return 0.0;
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double scale = std::abs(whole) > 0.0 ? std::abs(whole) : (b - a) * std::max({std::abs(fa), std::abs(fm), std::abs(fb)});
  const double eps = quad.rel_tol * scale;
  const double floor = eps / 1024.0;
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, eps, floor, 0, quad);
}

// Exact or adaptive integral of the normal form over [lo, hi] in 1D.
double integrate_spec(const NormalForm& nf, double lo, double hi, const QuadratureConfig& quad);
double spec_average(const NormalForm& nf, double lo, double hi, const QuadratureConfig& quad);

// Integral over the square cell [x0,x1] x [y0,y1]. Only bounded specs are
// supported; others raise QuadratureError.
double integrate_spec_2d(const WeightSpec& spec, double x0, double x1, double y0, double y1,
                         const QuadratureConfig& quad);

// Throws IntegrabilityError if some singular factor is not locally integrable
// on [lo, hi], and SpecError if a log factor would be evaluated at distance
// >= e from its center.
void check_integrability(const NormalForm& nf, double lo, double hi);

// Whether every factor on [lo, hi] stays bounded near its center.
bool is_bounded(const NormalForm& nf, double lo, double hi);

struct LogcalcResult {
  double integral;
  double ratio;  // integral / (t^(1-a) log(e/t)^(-b))
};

// I(t) = int_0^t s^(-a) log(e/s)^(-b) ds by adaptive quadrature.
LogcalcResult logcalc_integral(double a, double b, double t, const QuadratureConfig& quad = {});

}  // namespace weightlab
