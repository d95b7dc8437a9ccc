#include "weightlab/verify.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "weightlab/errors.hpp"

namespace weightlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
double guarded(F&& compute, std::string* error = nullptr) {
  try {
    return compute();
  } catch (const IntegrabilityError& e) {
    if (error) *error = e.what();
    return kInf;
  }
}

Json spec_list(std::span<const WeightSpec> w) {
  Json out = Json::array();
  for (const auto& s : w) out.push_back(to_string(s));
  return out;
}

Json pvec_json(const ExponentVector& pvec) {
  return std::vector<double>(pvec.p_list().begin(), pvec.p_list().end());
}

void describe_common(ReportDocument& doc, const Ladder& ladder, const VerifyOptions& opt) {
  doc.parameters["ladder"] = ladder.sizes;
  doc.parameters["dim"] = ladder.dim;
  doc.parameters["domain"] = {ladder.lo, ladder.hi};
  doc.parameters["family"] = family_name(opt.family.kind);
  doc.parameters["min_side"] = opt.family.min_side_cells;
  doc.parameters["stable_change"] = opt.policy.stable_change;
  doc.parameters["divergence_factor"] = opt.policy.divergence_factor;
}

Json series_json(std::span<const SeriesPoint> s, const SeriesPolicy& policy) {
  return {{"series", to_json(s)}, {"verdict", verdict_name(classify_series(s, policy))}};
}

bool stable(std::span<const SeriesPoint> s, const SeriesPolicy& policy) {
  return classify_series(s, policy) == SeriesVerdict::Stable;
}

std::string at_level(std::size_t n) { return " at N=" + std::to_string(n); }

// Samples of w_i, sigma_i, w = prod w_i^{p/p_i}.
struct VectorSamples {
  std::vector<SampledWeight> w;
  std::vector<SampledWeight> sigma;
  SampledWeight product;
};

std::vector<SampledWeight> sample_all(std::span<const WeightSpec> specs, const Grid& grid,
                                      const QuadratureConfig& quad) {
  std::vector<SampledWeight> out;
  for (const auto& s : specs) out.push_back(sample(s, grid, quad));
  return out;
}

double cor_ratio(std::span<const SampledWeight> w, const SampledWeight& product, const ExponentVector& pvec,
                 const CubeFamily& family) {
  std::vector<CellField> numer;
  std::vector<double> exps;
  for (std::size_t i = 0; i < w.size(); ++i) {
    numer.push_back(w[i].field);
    exps.push_back(pvec.p() / pvec.p_i(i));
  }
  return product_ratio("cormultrh", numer, exps, product.field, family).value;
}

}  // namespace

ConstantReport product_ratio(std::string name, std::span<const CellField> numer, std::span<const double> exponents,
                             const CellField& denom, const CubeFamily& family) {
  if (numer.empty() || numer.size() != exponents.size()) throw ArityError("product ratio needs one exponent per field");
  for (const auto& f : numer) require_same_grid(denom.grid(), f.grid(), "product ratio");
  const Grid& g = denom.grid();
  const int dim = g.dim();
  const CubeIndex index(g, family);
  const SweepResult r = sweep_family(index, [&](const Cube& q, std::size_t) {
    const double cells = static_cast<double>(cube_cells(q, dim));
    double v = 1.0;
    for (std::size_t i = 0; i < numer.size(); ++i) v *= std::pow(numer[i].cube_sum_unchecked(q) / cells, exponents[i]);
    return v / (denom.cube_sum_unchecked(q) / cells);
  });
  ConstantReport report;
  report.characteristic = std::move(name);
  report.value = r.max.value;
  report.argmax = index.at(r.max.ordinal);
  report.floor = r.min.value;
  report.argmin = index.at(r.min.ordinal);
  report.family = family;
  report.grid = g;
  return report;
}

ReportDocument verify_multrh(std::span<const WeightSpec> w, std::span<const double> s, const Ladder& ladder,
                             const VerifyOptions& opt) {
  ladder.validate();
  if (w.empty() || w.size() != s.size()) throw ArityError("multrh needs one exponent s_i per weight");
  double inv = 0.0;
  for (double si : s) {
    if (!(si > 1.0) || !std::isfinite(si)) throw PreconditionError("every s_i must lie in (1, inf)");
    inv += 1.0 / si;
  }
  if (std::abs(inv - 1.0) > 1e-12) throw PreconditionError("exponents must satisfy sum 1/s_i = 1");

  ReportDocument doc;
  doc.scenario = "multrh";
  describe_common(doc, ladder, opt);
  doc.parameters["weights"] = spec_list(w);
  doc.parameters["s"] = std::vector<double>(s.begin(), s.end());

  const std::size_t m = w.size();
  std::vector<SeriesPoint> r_series;
  std::vector<std::vector<SeriesPoint>> rh(m);
  for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
    const Grid grid = ladder.grid(k);
    const std::size_t n = ladder.sizes[k];
    Json level{{"N", n}};
    const auto ws = sample_all(w, grid, opt.quad);
    // w_i^{s_i} per weight; a non-integrable power leaves an empty slot.
    std::vector<std::optional<SampledWeight>> powered(m);
    std::string error;
    for (std::size_t i = 0; i < m; ++i) {
      try {
        powered[i] = power_of(ws[i], s[i]);
      } catch (const IntegrabilityError& e) {
        if (error.empty()) error = e.what();
      }
    }
    double floor = kInf;
    const double r = guarded(
        [&] {
          std::vector<CellField> numer;
          std::vector<double> exps;
          for (std::size_t i = 0; i < m; ++i) {
            if (!powered[i]) return kInf;
            numer.push_back(powered[i]->field);
            exps.push_back(1.0 / s[i]);
          }
          const SampledWeight prod = sample(WeightSpec::product({w.begin(), w.end()}), grid, opt.quad);
          const ConstantReport rep = product_ratio("multrh", numer, exps, prod.field, opt.family);
          floor = rep.floor;
          level["argmax"] = to_json(rep.argmax, grid.dim());
          return rep.value;
        },
        &error);
    r_series.push_back({n, r});
    level["R"] = number(r);
    level["R_floor"] = number(floor);
    if (!error.empty()) level["error"] = error;
    if (std::isfinite(floor)) doc.at_least("R floor >= 1" + at_level(n), floor, 1.0, 1e-9, "Hoelder direction");
    for (std::size_t i = 0; i < m; ++i) {
      const double v = powered[i] ? rh_constant(ws[i], *powered[i], s[i], opt.family).value : kInf;
      rh[i].push_back({n, v});
      level["rh"].push_back(number(v));
    }
    doc.levels.push_back(level);
  }
  bool all_rh = true;
  for (std::size_t i = 0; i < m; ++i) {
    doc.derived["rh"].push_back(series_json(rh[i], opt.policy));
    all_rh = all_rh && stable(rh[i], opt.policy);
  }
  doc.derived["R"] = series_json(r_series, opt.policy);
  doc.implies("R stable when every w_i is RH_{s_i}-stable", all_rh, stable(r_series, opt.policy));
  return doc;
}

ReportDocument verify_cor_multrh(std::span<const WeightSpec> w, const ExponentVector& pvec, const Ladder& ladder,
                                 const VerifyOptions& opt) {
  ladder.validate();
  if (w.size() != pvec.m()) throw ArityError("expected one weight per exponent");
  ReportDocument doc;
  doc.scenario = "cormultrh";
  describe_common(doc, ladder, opt);
  doc.parameters["weights"] = spec_list(w);
  doc.parameters["pvec"] = pvec_json(pvec);

  std::vector<SeriesPoint> r_series;
  std::vector<std::vector<SeriesPoint>> fw(w.size());
  for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
    const Grid grid = ladder.grid(k);
    const std::size_t n = ladder.sizes[k];
    Json level{{"N", n}};
    const auto ws = sample_all(w, grid, opt.quad);
    const SampledWeight prod = product_weight(ws, pvec);
    std::vector<CellField> numer;
    std::vector<double> exps;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      numer.push_back(ws[i].field);
      exps.push_back(pvec.p() / pvec.p_i(i));
    }
    const ConstantReport rep = product_ratio("cormultrh", numer, exps, prod.field, opt.family);
    r_series.push_back({n, rep.value});
    level["R"] = number(rep.value);
    level["R_floor"] = number(rep.floor);
    level["argmax"] = to_json(rep.argmax, grid.dim());
    doc.at_least("R' floor >= 1" + at_level(n), rep.floor, 1.0, 1e-9, "Hoelder direction");
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const double v = fw_constant(ws[i], opt.family).value;
      fw[i].push_back({n, v});
      level["fw"].push_back(number(v));
    }
    doc.levels.push_back(level);
  }
  bool all_fw = true;
  for (const auto& s : fw) {
    doc.derived["fw"].push_back(series_json(s, opt.policy));
    all_fw = all_fw && stable(s, opt.policy);
  }
  doc.derived["R"] = series_json(r_series, opt.policy);
  const SeriesVerdict rv = classify_series(r_series, opt.policy);
  if (rv != SeriesVerdict::Stable) doc.flags.push_back("R' " + std::string(verdict_name(rv)));
  doc.implies("R' stable when every w_i is FW-stable", all_fw, rv == SeriesVerdict::Stable);
  return doc;
}

ReportDocument product_bound_check(std::span<const WeightSpec> w, const ExponentVector& pvec, const Grid& grid,
                                   const VerifyOptions& opt) {
  if (w.size() != pvec.m()) throw ArityError("expected one weight per exponent");
  ReportDocument doc;
  doc.scenario = "product";
  doc.parameters["weights"] = spec_list(w);
  doc.parameters["pvec"] = pvec_json(pvec);
  doc.parameters["grid"] = to_json(grid);
  doc.parameters["family"] = family_name(opt.family.kind);

  const auto ws = sample_all(w, grid, opt.quad);
  std::vector<SampledWeight> sigmas;
  double bound = 1.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    sigmas.push_back(dual_of(ws[i], pvec.p_i(i)));
    const ConstantReport ap = ap_constant(ws[i], sigmas.back(), pvec.p_i(i), opt.family);
    doc.derived["ap"].push_back(to_json(ap));
    bound *= std::pow(ap.value, 1.0 / pvec.p_i(i));
  }
  const ConstantReport apvec = apvec_constant(ws, sigmas, pvec, opt.family);
  doc.derived["apvec"] = to_json(apvec);
  doc.derived["bound"] = number(bound);
  doc.derived["slack"] = number(bound - apvec.value);
  doc.at_most("[w]_Ap <= prod [w_i]_Api^(1/p_i)", apvec.value, bound, 1e-9 * bound);
  return doc;
}

ReportDocument theorem15_check(std::span<const WeightSpec> w, const ExponentVector& pvec, const Ladder& ladder,
                               const VerifyOptions& opt) {
  ladder.validate();
  if (w.size() != pvec.m()) throw ArityError("expected one weight per exponent");
  ReportDocument doc;
  doc.scenario = "thm15";
  describe_common(doc, ladder, opt);
  doc.parameters["weights"] = spec_list(w);
  doc.parameters["pvec"] = pvec_json(pvec);

  const std::size_t m = w.size();
  const double p = pvec.p();
  std::vector<SeriesPoint> apvec_series;
  std::vector<SeriesPoint> r_series;
  std::vector<std::vector<SeriesPoint>> ap(m);
  std::vector<std::vector<SeriesPoint>> fw(m);
  double min_slack = kInf;
  for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
    const Grid grid = ladder.grid(k);
    const std::size_t n = ladder.sizes[k];
    Json level{{"N", n}};
    const auto ws = sample_all(w, grid, opt.quad);
    std::vector<SampledWeight> sigmas;
    std::string error;
    const double apvec = guarded(
        [&] {
          for (std::size_t i = 0; i < m; ++i) sigmas.push_back(dual_of(ws[i], pvec.p_i(i)));
          return apvec_constant(ws, sigmas, pvec, opt.family).value;
        },
        &error);
    const double r = cor_ratio(ws, product_weight(ws, pvec), pvec, opt.family);
    apvec_series.push_back({n, apvec});
    r_series.push_back({n, r});
    level["apvec"] = number(apvec);
    level["R"] = number(r);
    if (!error.empty()) level["error"] = error;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = guarded([&] { return ap_constant(ws[i], sigmas.at(i), pvec.p_i(i), opt.family).value; });
      const double f = fw_constant(ws[i], opt.family).value;
      ap[i].push_back({n, a});
      fw[i].push_back({n, f});
      level["ap"].push_back(number(a));
      level["fw"].push_back(number(f));
      if (!std::isfinite(apvec) || !std::isfinite(a)) continue;
      const double lhs = std::pow(a, p / pvec.p_i(i));
      const double rhs = r * std::pow(apvec, p);
      const double slack = rhs * (1.0 + 1e-9) - lhs;
      min_slack = std::min(min_slack, slack);
      level["chain_slack"].push_back(number(slack));
      doc.at_most("[w_" + std::to_string(i + 1) + "]^(p/p_i) <= R' [w]^p" + at_level(n), lhs, rhs, 1e-9 * rhs);
    }
    doc.levels.push_back(level);
  }
  bool all_fw = true;
  bool all_ap = true;
  for (std::size_t i = 0; i < m; ++i) {
    doc.derived["ap"].push_back(series_json(ap[i], opt.policy));
    doc.derived["fw"].push_back(series_json(fw[i], opt.policy));
    all_fw = all_fw && stable(fw[i], opt.policy);
    all_ap = all_ap && stable(ap[i], opt.policy);
    const SeriesVerdict v = classify_series(ap[i], opt.policy);
    if (v != SeriesVerdict::Stable) doc.flags.push_back("w" + std::to_string(i + 1) + " ap " + std::string(verdict_name(v)));
  }
  doc.derived["apvec"] = series_json(apvec_series, opt.policy);
  doc.derived["R"] = series_json(r_series, opt.policy);
  doc.derived["min_chain_slack"] = number(min_slack);
  doc.implies("every [w_i]_Api stable when every w_i is FW-stable", all_fw, all_ap);
  return doc;
}

ReportDocument theorem17_check(std::span<const WeightSpec> w, const ExponentVector& pvec, const Ladder& ladder,
                               const VerifyOptions& opt) {
  ladder.validate();
  if (w.size() != pvec.m()) throw ArityError("expected one weight per exponent");
  ReportDocument doc;
  doc.scenario = "thm17";
  describe_common(doc, ladder, opt);
  doc.parameters["weights"] = spec_list(w);
  doc.parameters["pvec"] = pvec_json(pvec);
  doc.at_most("1/p + sum 1/p_i' = m", pvec.identity_residual(), 0.0, 1e-14);

  const std::size_t m = w.size();
  std::vector<SeriesPoint> fw_w;
  std::vector<std::vector<SeriesPoint>> fw_sigma(m);
  std::vector<SeriesPoint> apvec_series;
  for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
    const Grid grid = ladder.grid(k);
    const std::size_t n = ladder.sizes[k];
    Json level{{"N", n}};
    const auto ws = sample_all(w, grid, opt.quad);
    const double fw_prod = fw_constant(product_weight(ws, pvec), opt.family).value;
    fw_w.push_back({n, fw_prod});
    level["fw_w"] = number(fw_prod);
    std::vector<SampledWeight> sigmas;
    bool sigmas_ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      std::string error;
      const double v = guarded(
          [&] {
            sigmas.push_back(dual_of(ws[i], pvec.p_i(i)));
            return fw_constant(sigmas.back(), opt.family).value;
          },
          &error);
      if (!error.empty()) {
        sigmas_ok = false;
        level["error"].push_back(error);
      }
      fw_sigma[i].push_back({n, v});
      level["fw_sigma"].push_back(number(v));
    }
    const double apvec = sigmas_ok ? apvec_constant(ws, sigmas, pvec, opt.family).value : kInf;
    apvec_series.push_back({n, apvec});
    level["apvec"] = number(apvec);
    doc.levels.push_back(level);
  }
  bool fw_stable = stable(fw_w, opt.policy);
  bool fw_divergent = classify_series(fw_w, opt.policy) == SeriesVerdict::Divergent;
  doc.derived["fw_w"] = series_json(fw_w, opt.policy);
  for (std::size_t i = 0; i < m; ++i) {
    doc.derived["fw_sigma"].push_back(series_json(fw_sigma[i], opt.policy));
    const SeriesVerdict v = classify_series(fw_sigma[i], opt.policy);
    fw_stable = fw_stable && v == SeriesVerdict::Stable;
    fw_divergent = fw_divergent || v == SeriesVerdict::Divergent;
  }
  const SeriesVerdict av = classify_series(apvec_series, opt.policy);
  doc.derived["apvec"] = series_json(apvec_series, opt.policy);
  const bool consistent = fw_stable == (av == SeriesVerdict::Stable);
  const bool joint = fw_divergent && av == SeriesVerdict::Divergent;
  doc.derived["consistent"] = consistent;
  doc.derived["jointly_divergent"] = joint;
  if (joint) doc.flags.push_back("jointly-divergent");
  Assertion a;
  a.name = "all FW stable <=> [w]_Ap stable";
  a.relation = "iff";
  a.measured = fw_stable ? 1.0 : 0.0;
  a.bound = av == SeriesVerdict::Stable ? 1.0 : 0.0;
  a.passed = consistent;
  a.note = consistent ? "consistent" : "inconsistent";
  doc.assertions.push_back(a);
  return doc;
}

WeightSpec counterexample_w1() {
  return WeightSpec::piecewise(-1.0, 1.0, WeightSpec::powlog(0.0, 1.0, 2.0), WeightSpec::constant(1.0));
}

Ladder counterexample_ladder() { return Ladder{{1024, 4096, 16384}, 1, -2.0, 2.0}; }

ReportDocument counterexample_scenario(double p1, const Ladder& ladder, std::span<const int> scales,
                                       const VerifyOptions& opt) {
  if (!(p1 > 1.0 + 1e-6) || !std::isfinite(p1)) throw PreconditionError("p1 must lie in (1, inf) away from 1");
  ladder.validate();
  if (scales.size() < 2) throw PreconditionError("need at least two centered scales");
  const ExponentVector pvec({p1, p1});
  const double p = pvec.p();
  const double c1 = pvec.conj(0);
  const double dd_exponent = (c1 - 1.0) / (2.0 * c1 - 1.0);
  const WeightSpec w1 = counterexample_w1();
  const WeightSpec w2 = WeightSpec::constant(1.0);
  const WeightSpec w = WeightSpec::power(w1, p / p1);
  const WeightSpec dd = WeightSpec::power(w1, dd_exponent);

  ReportDocument doc;
  doc.scenario = "counterexample";
  describe_common(doc, ladder, opt);
  doc.parameters["p1"] = p1;
  doc.parameters["p2"] = p1;
  doc.parameters["w1"] = to_string(w1);
  doc.parameters["w2"] = to_string(w2);
  doc.parameters["scales"] = std::vector<int>(scales.begin(), scales.end());
  doc.derived["w"] = to_string(w);
  doc.derived["dual_dual"] = to_string(dd);

  const double rh_exponents[] = {1.5, 2.0};
  std::vector<SeriesPoint> a1_w, a1_dd, apvec, ap_w1;
  std::vector<std::vector<SeriesPoint>> rh(2);
  for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
    const Grid grid = ladder.grid(k);
    const std::size_t n = ladder.sizes[k];
    Json level{{"N", n}};
    a1_w.push_back({n, a1_constant(sample(w, grid, opt.quad), opt.family).value});
    a1_dd.push_back({n, a1_constant(sample(dd, grid, opt.quad), opt.family).value});
    const SampledWeight s1 = sample(w1, grid, opt.quad);
    const SampledWeight s2 = sample(w2, grid, opt.quad);
    const SampledWeight weights[] = {s1, s2};
    const SampledWeight duals[] = {dual_of(s1, p1), dual_of(s2, p1)};
    apvec.push_back({n, apvec_constant(weights, duals, pvec, opt.family).value});
    ap_w1.push_back({n, ap_constant(s1, duals[0], p1, opt.family).value});
    for (std::size_t j = 0; j < 2; ++j) {
      std::string error;
      const double v = guarded([&] { return rh_constant(s1, power_of(s1, rh_exponents[j]), rh_exponents[j], opt.family).value; },
                               &error);
      rh[j].push_back({n, v});
      level["rh"].push_back(number(v));
      if (!error.empty()) level["rh_error"].push_back(error);
    }
    level["a1_w"] = number(a1_w.back().value);
    level["a1_dual_dual"] = number(a1_dd.back().value);
    level["apvec"] = number(apvec.back().value);
    level["ap_w1"] = number(ap_w1.back().value);
    doc.levels.push_back(level);
  }

  Json centered = Json::array();
  std::vector<double> values;
  for (int k : scales) {
    values.push_back(centered_ap_value(w1, p1, 0.0, k, opt.quad));
    centered.push_back({{"k", k}, {"value", number(values.back())}});
  }
  doc.derived["centered_ap_w1"] = centered;
  doc.derived["ap_w1_grid"] = series_json(ap_w1, opt.policy);
  doc.derived["a1_w"] = series_json(a1_w, opt.policy);
  doc.derived["a1_dual_dual"] = series_json(a1_dd, opt.policy);
  doc.derived["apvec"] = series_json(apvec, opt.policy);

  doc.expect_verdict("(i) a1 of w = w1^(p/p1) stable", a1_w, SeriesVerdict::Stable, opt.policy);
  doc.expect_verdict("(ii) a1 of the dual-dual weight stable", a1_dd, SeriesVerdict::Stable, opt.policy);
  doc.expect_verdict("(iii) [w]_Ap stable", apvec, SeriesVerdict::Stable, opt.policy);
  doc.at_least("(iv) centered [w1]_Ap1 at k=" + std::to_string(scales.back()) + " over k=" + std::to_string(scales.front()),
               values.back() / values.front(), 1.5, 0.0);
  for (std::size_t j = 0; j < 2; ++j) {
    doc.derived["rh_w1"].push_back(series_json(rh[j], opt.policy));
    doc.expect_verdict("(v) [w1]_RH" + format_number(rh_exponents[j]) + " divergent", rh[j], SeriesVerdict::Divergent,
                       opt.policy);
  }
  return doc;
}

ReportDocument rh_complement_check(const WeightSpec& w1, const WeightSpec& w2, double s1, double s2,
                                   const Ladder& ladder, const VerifyOptions& opt) {
  const WeightSpec w[] = {w1, w2};
  const double s[] = {s1, s2};
  ReportDocument inner = verify_multrh(w, s, ladder, opt);
  ReportDocument doc;
  doc.scenario = "complement";
  doc.parameters = inner.parameters;
  doc.levels = inner.levels;
  doc.derived = inner.derived;
  for (const auto& a : inner.assertions) {
    if (a.relation != "implies") doc.assertions.push_back(a);
  }
  const auto verdict = [&](const Json& j) { return j["verdict"].get<std::string>() == "stable"; };
  const bool r_stable = verdict(doc.derived["R"]);
  const bool rh1 = verdict(doc.derived["rh"][0]);
  const bool rh2 = verdict(doc.derived["rh"][1]);
  if (!rh1) doc.flags.push_back("w1 rh not stable");
  doc.implies("[w2]_RH_s2 stable when R and [w1]_RH_s1 are stable", r_stable && rh1, rh2);
  return doc;
}

ReportDocument lemma_jn_scenario(const WeightSpec& w, double p, double s, const Ladder& ladder,
                                 const VerifyOptions& opt) {
  const LemmaJnReport r = lemma_jn_check(w, p, s, ladder, opt.family, opt.quad, opt.policy);
  ReportDocument doc;
  doc.scenario = "lemma";
  describe_common(doc, ladder, opt);
  doc.parameters["weight"] = to_string(w);
  doc.parameters["p"] = p;
  doc.parameters["s"] = s;
  doc.derived = to_json(r);
  Assertion a;
  a.name = "A_p, RH_s and A_q entries consistent";
  a.relation = "verdict";
  a.measured = r.consistent ? 1.0 : 0.0;
  a.bound = 1.0;
  a.passed = r.consistent;
  a.note = r.consistent ? "consistent" : "inconsistent";
  doc.assertions.push_back(a);
  return doc;
}

}  // namespace weightlab
