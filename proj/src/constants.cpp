#include "weightlab/constants.hpp"

#include <cmath>
#include <limits>

#include "weightlab/errors.hpp"

namespace weightlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Quotient>
ConstantReport sweep_report(std::string name, const Grid& grid, const CubeFamily& family, Quotient&& quotient) {
  const CubeIndex index(grid, family);
  const SweepResult r = sweep_family(index, quotient);
  ConstantReport report;
  report.characteristic = std::move(name);
  report.value = r.max.value;
  report.argmax = index.at(r.max.ordinal);
  report.floor = r.min.value;
  report.argmin = index.at(r.min.ordinal);
  report.family = family;
  report.grid = grid;
  if (report.floor < 1.0 - 1e-9) report.flags.push_back("floor-below-one");
  return report;
}

double average(const CellField& f, const Cube& q, int dim) {
  return f.cube_sum_unchecked(q) / static_cast<double>(cube_cells(q, dim));
}

bool same_exponent(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

ConstantReport infinite_report(std::string characteristic, const Grid& grid, const CubeFamily& family,
                               std::string reason) {
  ConstantReport report;
  report.characteristic = std::move(characteristic);
  report.value = kInf;
  report.floor = kInf;
  report.family = family;
  report.grid = grid;
  report.flags.push_back("not-integrable");
  report.flags.push_back(std::move(reason));
  return report;
}

void require_power_of(const SampledWeight& w, const SampledWeight& derived, double exponent, std::string_view what) {
  require_same_grid(w.grid(), derived.grid(), what);
  const std::string context(what);
  if (const auto* d = std::get_if<DiscretePower>(&derived.provenance)) {
    if (!same_exponent(d->exponent, exponent)) {
      throw ConsistencyError(context + ": discrete power has exponent " + format_number(d->exponent) + ", expected " +
                             format_number(exponent));
    }
    if (d->source_fingerprint != fingerprint(w.field)) {
      throw ConsistencyError(context + ": discrete power was taken of a different field");
    }
    return;
  }
  if (const auto* d = std::get_if<FromSpec>(&derived.provenance)) {
    const auto* s = std::get_if<FromSpec>(&w.provenance);
    if (s == nullptr) throw ConsistencyError(context + ": spec-level sample paired with a non-spec weight");
    if (!(d->quad == s->quad)) throw ConsistencyError(context + ": samples use different quadrature settings");
    if (!(d->spec == WeightSpec::power(s->spec, exponent))) {
      throw ConsistencyError(context + ": expected " + to_string(WeightSpec::power(s->spec, exponent)) + ", got " +
                             to_string(d->spec));
    }
    return;
  }
  if (!std::holds_alternative<RawData>(w.provenance)) {
    throw ConsistencyError(context + ": raw data paired with a derived weight");
  }
}

SampledWeight power_of(const SampledWeight& w, double exponent) {
  if (const auto* s = std::get_if<FromSpec>(&w.provenance)) {
    return sample(WeightSpec::power(s->spec, exponent), w.grid(), s->quad);
  }
  return discrete_power(w, exponent);
}

SampledWeight dual_of(const SampledWeight& w, double p) {
  if (const auto* s = std::get_if<FromSpec>(&w.provenance)) return sample(dual_spec(s->spec, p), w.grid(), s->quad);
  return discrete_dual(w, p);
}

SampledWeight product_weight(std::span<const SampledWeight> weights, const ExponentVector& pvec) {
  if (weights.size() != pvec.m()) throw ArityError("expected one weight per exponent");
  bool spec_level = true;
  for (const auto& w : weights) {
    require_same_grid(weights.front().grid(), w.grid(), "product weight");
    const auto* s = std::get_if<FromSpec>(&w.provenance);
    if (s == nullptr || !(s->quad == std::get<FromSpec>(weights.front().provenance).quad)) spec_level = false;
  }
  if (spec_level) {
    std::vector<WeightSpec> factors;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      factors.push_back(WeightSpec::power(*weights[i].spec(), pvec.p() / pvec.p_i(i)));
    }
    return sample(WeightSpec::product(std::move(factors)), weights.front().grid(),
                  std::get<FromSpec>(weights.front().provenance).quad);
  }
  std::vector<CellField> fields;
  std::vector<double> exponents;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    fields.push_back(weights[i].field);
    exponents.push_back(pvec.p() / pvec.p_i(i));
  }
  return raw_weight(discrete_product(fields, exponents));
}

ConstantReport a1_constant(const SampledWeight& w, const CubeFamily& family) {
  const CellField& f = w.field;
  const int dim = w.grid().dim();
  return sweep_report("a1", w.grid(), family,
                      [&](const Cube& q, std::size_t) { return average(f, q, dim) / f.cube_min_unchecked(q); });
}

ConstantReport ap_constant(const SampledWeight& w, const SampledWeight& sigma, double p, const CubeFamily& family) {
  require_power_of(w, sigma, 1.0 - conjugate(p), "ap dual");
  const int dim = w.grid().dim();
  auto report = sweep_report("ap", w.grid(), family, [&](const Cube& q, std::size_t) {
    return average(w.field, q, dim) * std::pow(average(sigma.field, q, dim), p - 1.0);
  });
  return report;
}

ConstantReport rh_constant(const SampledWeight& w, const SampledWeight& ws, double s, const CubeFamily& family) {
  if (!(s > 1.0) || !std::isfinite(s)) throw PreconditionError("reverse Hoelder exponent must lie in (1, inf)");
  require_power_of(w, ws, s, "rh power");
  const int dim = w.grid().dim();
  return sweep_report("rh", w.grid(), family, [&](const Cube& q, std::size_t) {
    return std::pow(average(ws.field, q, dim), 1.0 / s) / average(w.field, q, dim);
  });
}

ConstantReport fw_constant(const SampledWeight& w, const CubeFamily& family, MaximalAlgorithm algorithm) {
  const Grid& g = w.grid();
  const CubeIndex index(g, family);
  const CellField ones(g, std::vector<double>(g.cell_count(), 1.0));
  const CellField fields[] = {w.field};
  const std::vector<double> sums = localized_maximal_sums(fields, ones, 1.0, index, algorithm);
  return sweep_report("fw", g, family,
                      [&](const Cube& q, std::size_t ord) { return sums[ord] / w.field.cube_sum_unchecked(q); });
}

ConstantReport apvec_constant(std::span<const SampledWeight> weights, std::span<const SampledWeight> duals,
                              const ExponentVector& pvec, const CubeFamily& family) {
  if (weights.size() != pvec.m() || duals.size() != pvec.m()) {
    throw ArityError("apvec needs " + std::to_string(pvec.m()) + " weights and duals, got " +
                     std::to_string(weights.size()) + " and " + std::to_string(duals.size()));
  }
  bool spec_level = true;
  for (std::size_t i = 0; i < pvec.m(); ++i) {
    require_same_grid(weights.front().grid(), weights[i].grid(), "apvec");
    require_power_of(weights[i], duals[i], 1.0 - pvec.conj(i), "apvec dual " + std::to_string(i + 1));
    if (!weights[i].from_spec() || !duals[i].from_spec()) spec_level = false;
  }
  SampledWeight w = spec_level ? product_weight(weights, pvec) : [&] {
    std::vector<SampledWeight> raw;
    for (const auto& wi : weights) raw.push_back(raw_weight(wi.field));
    return product_weight(raw, pvec);
  }();
  const int dim = w.grid().dim();
  const double p = pvec.p();
  auto report = sweep_report("apvec", w.grid(), family, [&](const Cube& q, std::size_t) {
    double v = std::pow(average(w.field, q, dim), 1.0 / p);
    for (std::size_t i = 0; i < pvec.m(); ++i) v *= std::pow(average(duals[i].field, q, dim), 1.0 / pvec.conj(i));
    return v;
  });
  return report;
}

std::vector<ConstantReport> ap_ladder(const SampledWeight& w, const CubeFamily& family) {
  std::vector<ConstantReport> out;
  for (double p : {2.0, 4.0, 8.0, 16.0}) {
    try {
      auto r = ap_constant(w, dual_of(w, p), p, family);
      r.characteristic = "ap" + format_number(p);
      out.push_back(std::move(r));
    } catch (const IntegrabilityError& e) {
      out.push_back(infinite_report("ap" + format_number(p), w.grid(), family, e.what()));
    }
  }
  return out;
}

double centered_ap_value(const WeightSpec& w, double p, double center, int k, const QuadratureConfig& quad) {
  const double r = std::ldexp(1.0, -k);
  const NormalForm nw = NormalForm::of(w);
  const NormalForm ns = NormalForm::of(dual_spec(w, p));
  check_integrability(nw, center - r, center + r);
  check_integrability(ns, center - r, center + r);
  return spec_average(nw, center - r, center + r, quad) *
         std::pow(spec_average(ns, center - r, center + r, quad), p - 1.0);
}

double centered_rh_value(const WeightSpec& w, double s, double center, int k, const QuadratureConfig& quad) {
  const double r = std::ldexp(1.0, -k);
  const NormalForm nw = NormalForm::of(w);
  const NormalForm ns = NormalForm::of(WeightSpec::power(w, s));
  check_integrability(nw, center - r, center + r);
  check_integrability(ns, center - r, center + r);
  return std::pow(spec_average(ns, center - r, center + r, quad), 1.0 / s) / spec_average(nw, center - r, center + r, quad);
}

LemmaJnReport lemma_jn_check(const WeightSpec& w, double p, double s, const Ladder& ladder, const CubeFamily& family,
                             const QuadratureConfig& quad, const SeriesPolicy& policy) {
  conjugate(p);
  if (!(s > 1.0) || !std::isfinite(s)) throw PreconditionError("lemma check needs s in (1, inf)");
  ladder.validate();
  LemmaJnReport report{p, s, s * (p - 1.0) + 1.0, {}, {}, {}, {}, {}, {}, false};
  const WeightSpec ws = WeightSpec::power(w, s);
  auto guarded = [](auto&& compute) {
    try {
      return compute();
    } catch (const IntegrabilityError&) {
      return kInf;
    }
  };
  for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
    const Grid grid = ladder.grid(k);
    const std::size_t n = ladder.sizes[k];
    const double ap = guarded([&] {
      const SampledWeight sw = sample(w, grid, quad);
      return ap_constant(sw, sample(dual_spec(w, p), grid, quad), p, family).value;
    });
    const double rh = guarded([&] {
      const SampledWeight sw = sample(w, grid, quad);
      return rh_constant(sw, sample(ws, grid, quad), s, family).value;
    });
    const double aq = guarded([&] {
      const SampledWeight sws = sample(ws, grid, quad);
      return ap_constant(sws, sample(dual_spec(ws, report.q), grid, quad), report.q, family).value;
    });
    report.ap.push_back({n, ap});
    report.rh.push_back({n, rh});
    report.aq.push_back({n, aq});
  }
  report.ap_verdict = classify_series(report.ap, policy);
  report.rh_verdict = classify_series(report.rh, policy);
  report.aq_verdict = classify_series(report.aq, policy);
  const bool all_stable = report.ap_verdict == SeriesVerdict::Stable && report.rh_verdict == SeriesVerdict::Stable &&
                          report.aq_verdict == SeriesVerdict::Stable;
  const bool diverge_together =
      report.rh_verdict == SeriesVerdict::Divergent && report.aq_verdict == SeriesVerdict::Divergent;
  report.consistent = all_stable || diverge_together;
  return report;
}

}  // namespace weightlab
