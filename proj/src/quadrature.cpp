#include "weightlab/quadrature.hpp"

#include <numbers>
#include <string>
#include <vector>

namespace weightlab {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw PreconditionError("quadrature tolerance must lie in (0, 1e-3]");
  if (max_depth < 10) throw PreconditionError("quadrature depth must be at least 10");
}

namespace {

constexpr double kTiny = 1e-300;
constexpr double kE = std::numbers::e;

bool non_integrable(const Singularity& f) { return f.a > 1.0 || (f.a == 1.0 && f.b <= 1.0); }

[[noreturn]] void throw_non_integrable(const Singularity& f) {
  throw IntegrabilityError("factor |x-" + format_number(f.center) + "|^" + format_number(-f.a) + " log^" +
                           format_number(-f.b) + " is not locally integrable at its center");
}

void check_log_range(const Singularity& f, double lo, double hi) {
  if (f.b == 0.0) return;
  const double reach = std::max(std::abs(lo - f.center), std::abs(hi - f.center));
  if (!(reach < kE)) {
    throw SpecError("powlog with b != 0 centered at " + format_number(f.center) +
                    " is undefined at distance >= e from its center");
  }
}

// int_{d1}^{d2} s^(-a) log(e/s)^(-b) ds for b == 0 or a == 1, written to stay
// accurate when d2 - d1 is tiny compared to d1.
double closed_form(double a, double b, double d1, double d2) {
  const double width = d2 - d1;
  if (b == 0.0) {
    if (a == 0.0) return width;
    if (a == 1.0) {
      if (d1 == 0.0) throw IntegrabilityError("1/|x| is not locally integrable");
      return std::log1p(width / d1);
    }
    if (d1 == 0.0) {
      if (a > 1.0) throw IntegrabilityError("|x|^-a with a > 1 is not locally integrable");
      return std::pow(d2, 1.0 - a) / (1.0 - a);
    }
    return std::pow(d1, 1.0 - a) * std::expm1((1.0 - a) * std::log1p(width / d1)) / (1.0 - a);
  }
  // a == 1: antiderivative of s^-1 L^-b is -L^(1-b)/(1-b), L = log(e/s).
  if (d1 == 0.0) {
    if (b <= 1.0) throw IntegrabilityError("1/(|x| log^b) with b <= 1 is not locally integrable");
    return std::pow(1.0 - std::log(d2), 1.0 - b) / (b - 1.0);
  }
  const double l1 = 1.0 - std::log(d1);
  const double dl = -std::log1p(width / d1);  // L(d2) - L(d1)
  if (b == 1.0) return -std::log1p(dl / l1);
  return -std::pow(l1, 1.0 - b) * std::expm1((1.0 - b) * std::log1p(dl / l1)) / (1.0 - b);
}

double log_term(double t, double a, double b) {
  const double r = std::max(t, kTiny);
  double v = 0.0;
  if (a != 0.0) v -= a * std::log(r);
  if (b != 0.0) v -= b * std::log(1.0 - std::log(r));
  return v;
}

// Numeric integral of `term` over [lo, hi] when at most one endpoint is a
// singular center.
double integrate_numeric(const Monomial& term, double lo, double hi, const QuadratureConfig& quad) {
  int skip = -1;
  bool at_lo = false;
  if (quad.split_singularities) {
    for (std::size_t k = 0; k < term.factors.size(); ++k) {
      if (term.factors[k].center == lo || term.factors[k].center == hi) {
        skip = static_cast<int>(k);
        at_lo = term.factors[k].center == lo;
        break;
      }
    }
  }
  const double h = hi - lo;
  auto direct = [&](double x) { return term.evaluate(x); };
  if (skip < 0) return adaptive_simpson(direct, lo, hi, quad);

  const Singularity& f = term.factors[static_cast<std::size_t>(skip)];
  if (non_integrable(f)) throw_non_integrable(f);
  auto point = [&](double t) { return at_lo ? lo + t : hi - t; };
  auto others = [&](double t) { return term.evaluate_without(point(t), static_cast<std::size_t>(skip)); };

  if (f.a <= 0.0) {
    auto g = [&](double t) { return std::exp(log_term(t, f.a, f.b)) * others(t); };
    return adaptive_simpson(g, 0.0, h, quad);
  }
  if (f.a < 1.0) {
    // t = s^(1/(1-a)) absorbs t^-a into the Jacobian.
    const double k = 1.0 - f.a;
    auto g = [&](double s) {
      const double t = std::pow(std::max(s, kTiny), 1.0 / k);
      return std::exp(log_term(t, 0.0, f.b)) * others(t) / k;
    };
    return adaptive_simpson(g, 0.0, std::pow(h, k), quad);
  }
  // a == 1, b > 1: v = L(t)^(1-b)/(b-1) absorbs the whole factor.
  const double c = f.b - 1.0;
  auto t_of = [&](double v) {
    if (v <= 0.0) return 0.0;
    return kE * std::exp(-std::pow(c * v, -1.0 / c));
  };
  const double top = std::pow(1.0 - std::log(h), -c) / c;
  auto g = [&](double v) { return others(t_of(v)); };
  return adaptive_simpson(g, 0.0, top, quad);
}

double integrate_piece(const Monomial& term, double lo, double hi, const QuadratureConfig& quad, bool force_numeric) {
  if (!(lo < hi)) return 0.0;
  for (const auto& f : term.factors) check_log_range(f, lo, hi);
  if (term.factors.empty()) return term.coefficient * (hi - lo);

  if (!force_numeric && term.factors.size() == 1) {
    const Singularity& f = term.factors.front();
    if (f.b == 0.0 || f.a == 1.0) {
      if (f.center <= lo) return term.coefficient * closed_form(f.a, f.b, lo - f.center, hi - f.center);
      if (f.center >= hi) return term.coefficient * closed_form(f.a, f.b, f.center - hi, f.center - lo);
      return term.coefficient * (closed_form(f.a, f.b, 0.0, f.center - lo) + closed_form(f.a, f.b, 0.0, hi - f.center));
    }
  }

  // Split so that no endpoint pair carries two different singular centers.
  int singular_ends = 0;
  for (const auto& f : term.factors) {
    if (f.center == lo || f.center == hi) ++singular_ends;
  }
  if (quad.split_singularities && singular_ends == 2) {
    const double mid = 0.5 * (lo + hi);
    return integrate_numeric(term, lo, mid, quad) + integrate_numeric(term, mid, hi, quad);
  }
  return integrate_numeric(term, lo, hi, quad);
}

double integrate_form(const NormalForm& nf, double lo, double hi, const QuadratureConfig& quad, bool force_numeric) {
  std::vector<double> cuts{lo};
  for (double x : nf.split_points(lo, hi)) cuts.push_back(x);
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const Piece& piece = nf.piece_at(0.5 * (a + b));
    total += integrate_piece(piece.term, a, b, quad, force_numeric);
  }
  return total;
}

}  // namespace

double integrate_spec(const NormalForm& nf, double lo, double hi, const QuadratureConfig& quad) {
  return integrate_form(nf, lo, hi, quad, false);
}

double spec_average(const NormalForm& nf, double lo, double hi, const QuadratureConfig& quad) {
  if (!(lo < hi)) throw DomainError("average over an empty interval");
  return integrate_spec(nf, lo, hi, quad) / (hi - lo);
}

void check_integrability(const NormalForm& nf, double lo, double hi) {
  for (const auto& p : nf.pieces()) {
    const double a = std::max(p.lo, lo);
    const double b = std::min(p.hi, hi);
    if (!(a < b)) continue;
    for (const auto& f : p.term.factors) {
      check_log_range(f, a, b);
      if (f.center >= a && f.center <= b && non_integrable(f)) throw_non_integrable(f);
    }
  }
}

bool is_bounded(const NormalForm& nf, double lo, double hi) {
  for (const auto& p : nf.pieces()) {
    if (!(std::max(p.lo, lo) < std::min(p.hi, hi))) continue;
    for (const auto& f : p.term.factors) {
      if (f.a > 0.0 || (f.a == 0.0 && f.b < 0.0)) return false;
    }
  }
  return true;
}

double integrate_spec_2d(const WeightSpec& spec, double x0, double x1, double y0, double y1,
                         const QuadratureConfig& quad) {
  auto row = [&](double x) {
    return adaptive_simpson([&](double y) { return evaluate(spec, x, y); }, y0, y1, quad);
  };
  return adaptive_simpson(row, x0, x1, quad);
}

LogcalcResult logcalc_integral(double a, double b, double t, const QuadratureConfig& quad) {
  if (!(a < 1.0)) throw IntegrabilityError("s^-a log(e/s)^-b diverges at 0 for a >= 1");
  if (!(b >= 0.0)) throw PreconditionError("logcalc requires b >= 0");
  if (!(t > 0.0 && t <= 1.0)) throw PreconditionError("logcalc requires t in (0, 1]");
  quad.validate();
  NormalForm nf = NormalForm::of(WeightSpec::powlog(0.0, a, b));
  const double integral = integrate_form(nf, 0.0, t, quad, true);
  const double scale = std::exp((1.0 - a) * std::log(t) - b * std::log(1.0 - std::log(t)));
  return {integral, integral / scale};
}

}  // namespace weightlab
