#include "weightlab/twoweight.hpp"

#include <cmath>
#include <limits>

#include "weightlab/errors.hpp"

namespace weightlab {

namespace {

std::vector<CellField> fields_of(std::span<const SampledWeight> weights) {
  std::vector<CellField> out;
  for (const auto& w : weights) out.push_back(w.field);
  return out;
}

void require_inputs(const SampledWeight& u, std::span<const SampledWeight> sigmas, const ExponentVector& pvec) {
  if (sigmas.size() != pvec.m()) {
    throw ArityError("expected " + std::to_string(pvec.m()) + " sigma weights, got " + std::to_string(sigmas.size()));
  }
  for (const auto& s : sigmas) require_same_grid(u.grid(), s.grid(), "two-weight inputs");
}

double mass_product(std::span<const CellField> sigmas, const ExponentVector& pvec, const Cube& q, double volume) {
  double den = 1.0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    den *= std::pow(sigmas[i].cube_sum_unchecked(q) * volume, 1.0 / pvec.p_i(i));
  }
  return den;
}

CellField indicator(const Grid& g, const Cube& q) {
  std::vector<double> v(g.cell_count(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (cube_contains(q, g.unlinear(k), g.dim())) v[k] = 1.0;
  }
  return CellField(g, std::move(v));
}

}  // namespace

ConstantReport sp_constant(const SampledWeight& u, std::span<const SampledWeight> sigmas, const ExponentVector& pvec,
                           const CubeFamily& family, MaximalAlgorithm algorithm) {
  require_inputs(u, sigmas, pvec);
  const Grid& g = u.grid();
  const CubeIndex index(g, family);
  const auto fields = fields_of(sigmas);
  const double p = pvec.p();
  const double volume = g.cell_volume();
  const std::vector<double> sums = localized_maximal_sums(fields, u.field, p, index, algorithm);
  const SweepResult r = sweep_family(index, [&](const Cube& q, std::size_t ord) {
    return std::pow(sums[ord] * volume, 1.0 / p) / mass_product(fields, pvec, q, volume);
  });
  ConstantReport report;
  report.characteristic = "sp";
  report.value = r.max.value;
  report.argmax = index.at(r.max.ordinal);
  report.floor = r.min.value;
  report.argmin = index.at(r.min.ordinal);
  report.family = family;
  report.grid = g;
  return report;
}

std::vector<double> indicator_ratios(const SampledWeight& u, std::span<const SampledWeight> sigmas,
                                     const ExponentVector& pvec, const CubeIndex& index) {
  require_inputs(u, sigmas, pvec);
  const Grid& g = index.grid();
  const int dim = g.dim();
  const std::size_t n = g.cells_per_side();
  const auto fields = fields_of(sigmas);
  const double p = pvec.p();
  const double volume = g.cell_volume();
  std::vector<double> ratios(index.size());

  if (index.family().kind != FamilyKind::Dyadic) {
    for_each_block(index.size(), 1, [&](std::size_t ord, std::size_t, std::size_t) {
      const Cube q = index.at(ord);
      const CellField chi = indicator(g, q);
      std::vector<CellField> masked;
      for (const auto& s : fields) {
        std::vector<double> v(g.cell_count());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = chi[k] * s[k];
        masked.emplace_back(g, std::move(v));
      }
      const MaximalResult m = mult_maximal(masked, index.family(), MaximalAlgorithm::Fast);
      ratios[ord] = lp_norm(m.values, u.field, p) / mass_product(fields, pvec, q, volume);
    });
    return ratios;
  }

  // Dyadic: inside Q the localized sum; outside, on A_j \ A_{j-1} for the
  // ancestors A_j of Q, the best cube meeting Q is A_j itself.
  const std::vector<double> inside = localized_maximal_sums(fields, u.field, p, index, MaximalAlgorithm::Fast);
  for_each_block(index.size(), 256, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t ord = begin; ord < end; ++ord) {
      const Cube q = index.at(ord);
      const CellIndex q_hi{q.anchor[0] + q.side, dim == 1 ? 0 : q.anchor[1] + q.side};
      CompensatedSum total;
      total.add(inside[ord]);
      Cube child = q;
      while (child.side < n) {
        Cube parent;
        parent.side = child.side * 2;
        parent.anchor = {child.anchor[0] / parent.side * parent.side,
                         dim == 1 ? 0 : child.anchor[1] / parent.side * parent.side};
        double ring = 0.0;
        const std::size_t kids = dim == 1 ? 2 : 4;
        for (std::size_t c = 0; c < kids; ++c) {
          Cube sib;
          sib.side = child.side;
          sib.anchor = {parent.anchor[0] + (dim == 1 ? c : c / 2) * child.side,
                        dim == 1 ? 0 : parent.anchor[1] + (c % 2) * child.side};
          if (sib.anchor == child.anchor) continue;
          ring += u.field.cube_sum_unchecked(sib);
        }
        const double v = product_of_box_averages(fields, q.anchor, q_hi, static_cast<double>(cube_cells(parent, dim)));
        total.add(std::pow(v, p) * ring);
        child = parent;
      }
      ratios[ord] = std::pow(total.value() * volume, 1.0 / p) / mass_product(fields, pvec, q, volume);
    }
  });
  return ratios;
}

double probe_ratio(const SampledWeight& u, std::span<const SampledWeight> sigmas, std::span<const CellField> probes,
                   const ExponentVector& pvec, const CubeFamily& family) {
  require_inputs(u, sigmas, pvec);
  if (probes.size() != pvec.m()) throw ArityError("expected one probe function per sigma");
  std::vector<CellField> products;
  double den = 1.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    require_same_grid(u.grid(), probes[i].grid(), "probe");
    std::vector<double> v(probes[i].size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = probes[i][k] * sigmas[i].field[k];
    products.emplace_back(u.grid(), std::move(v));
    den *= lp_norm(probes[i], sigmas[i].field, pvec.p_i(i));
  }
  if (!(den > 0.0)) return 0.0;
  const MaximalResult m = mult_maximal(products, family, MaximalAlgorithm::Fast);
  return lp_norm(m.values, u.field, pvec.p()) / den;
}

namespace {

CellField random_step(const Grid& g, std::uint64_t seed, std::size_t probe, std::size_t component, int level) {
  const int shift = g.levels() - level;
  std::vector<double> v(g.cell_count());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const CellIndex c = g.unlinear(k);
    const std::size_t cell = g.dim() == 1 ? (c[0] >> shift) : ((c[0] >> shift) << level) + (c[1] >> shift);
    v[k] = std::exp2(8.0 * hash_unit(seed, 0x70726f6265ULL + probe, component, cell));
  }
  return CellField(g, std::move(v));
}

}  // namespace

TwoWeightReport empirical_norm(const SampledWeight& u, std::span<const SampledWeight> sigmas,
                               const ExponentVector& pvec, const CubeFamily& family, const ProbeSet& probes) {
  require_inputs(u, sigmas, pvec);
  TwoWeightReport report;
  report.sp = sp_constant(u, sigmas, pvec, family);
  const Grid& g = u.grid();
  const CubeIndex index(g, family);
  if (probes.indicators) {
    const std::vector<double> ratios = indicator_ratios(u, sigmas, pvec, index);
    for (std::size_t ord = 0; ord < ratios.size(); ++ord) {
      ++report.probes_evaluated;
      if (ratios[ord] > report.empirical) {
        report.empirical = ratios[ord];
        report.probe_is_indicator = true;
        report.probe_cube = index.at(ord);
        report.probe = "indicator " + describe(report.probe_cube, g.dim());
      }
    }
  }
  for (std::size_t r = 0; r < probes.random_count; ++r) {
    const int level = static_cast<int>(hash_counter(probes.seed, r, 0x6c6576656cULL, 0) %
                                       static_cast<std::uint64_t>(g.levels() + 1));
    std::vector<CellField> f;
    for (std::size_t i = 0; i < pvec.m(); ++i) f.push_back(random_step(g, probes.seed, r, i, level));
    const double ratio = probe_ratio(u, sigmas, f, pvec, family);
    ++report.probes_evaluated;
    if (ratio > report.empirical) {
      report.empirical = ratio;
      report.probe_is_indicator = false;
      report.probe = "random-step " + std::to_string(r) + " level " + std::to_string(level);
    }
  }
  report.ordering_holds = report.empirical >= report.sp.value * (1.0 - 1e-9);
  report.probe_matches_sp_argmax = report.probe_is_indicator && report.probe_cube == report.sp.argmax;
  return report;
}

Json to_json(const TwoWeightReport& report) {
  Json j;
  j["sp"] = to_json(report.sp);
  j["empirical_norm"] = {{"value", number(report.empirical)},
                         {"probe", report.probe},
                         {"probe_is_indicator", report.probe_is_indicator},
                         {"probes_evaluated", report.probes_evaluated},
                         {"label", "empirical lower bound"}};
  if (report.probe_is_indicator) j["empirical_norm"]["probe_cube"] = to_json(report.probe_cube, report.sp.grid.dim());
  j["ordering_holds"] = report.ordering_holds;
  j["probe_matches_sp_argmax"] = report.probe_matches_sp_argmax;
  return j;
}

ReportDocument theorem19_scenario(std::span<const WeightSpec> sigma_specs, const WeightSpec& u_spec,
                                  const ExponentVector& pvec, const Ladder& ladder, const CubeFamily& family,
                                  const ProbeSet& probes, const QuadratureConfig& quad, const SeriesPolicy& policy) {
  ladder.validate();
  if (sigma_specs.size() != pvec.m()) throw ArityError("expected one sigma spec per exponent");
  constexpr double inf = std::numeric_limits<double>::infinity();
  ReportDocument doc;
  doc.scenario = "thm19";
  doc.parameters["pvec"] = std::vector<double>(pvec.p_list().begin(), pvec.p_list().end());
  doc.parameters["u"] = to_string(u_spec);
  for (const auto& s : sigma_specs) doc.parameters["sigma"].push_back(to_string(s));
  doc.parameters["family"] = family_name(family.kind);
  doc.parameters["ladder"] = ladder.sizes;
  doc.parameters["dim"] = ladder.dim;
  doc.parameters["domain"] = {ladder.lo, ladder.hi};
  doc.parameters["probes"] = {{"indicators", probes.indicators}, {"random", probes.random_count}, {"seed", probes.seed}};

  std::vector<std::vector<SeriesPoint>> fw(pvec.m());
  std::vector<SeriesPoint> sp_series;
  std::vector<SeriesPoint> emp_series;
  for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
    const Grid grid = ladder.grid(k);
    const std::size_t n = ladder.sizes[k];
    Json level{{"N", n}};
    try {
      std::vector<SampledWeight> sigmas;
      for (const auto& s : sigma_specs) sigmas.push_back(sample(s, grid, quad));
      const SampledWeight u = sample(u_spec, grid, quad);
      for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const double v = fw_constant(sigmas[i], family).value;
        fw[i].push_back({n, v});
        level["fw_sigma"].push_back(number(v));
      }
      const TwoWeightReport r = empirical_norm(u, sigmas, pvec, family, probes);
      sp_series.push_back({n, r.sp.value});
      emp_series.push_back({n, r.empirical});
      level["sp"] = number(r.sp.value);
      level["empirical_norm"] = number(r.empirical);
      level["probe"] = r.probe;
      doc.at_least("empirical >= sp at N=" + std::to_string(n), r.empirical, r.sp.value, 1e-9 * r.sp.value,
                   "indicator probes realize the testing condition from below");
    } catch (const IntegrabilityError& e) {
      for (auto& s : fw) s.push_back({n, inf});
      sp_series.push_back({n, inf});
      emp_series.push_back({n, inf});
      level["error"] = e.what();
    }
    doc.levels.push_back(level);
  }

  bool hypothesis = true;
  Json fw_json = Json::array();
  for (std::size_t i = 0; i < fw.size(); ++i) {
    const SeriesVerdict v = classify_series(fw[i], policy);
    fw_json.push_back({{"series", to_json(fw[i])}, {"verdict", verdict_name(v)}});
    if (v != SeriesVerdict::Stable) {
      hypothesis = false;
      doc.flags.push_back("sigma" + std::to_string(i + 1) + " fw " + std::string(verdict_name(v)));
    }
  }
  const SeriesVerdict sp_v = classify_series(sp_series, policy);
  const SeriesVerdict emp_v = classify_series(emp_series, policy);
  if (sp_v != SeriesVerdict::Stable) hypothesis = false;
  doc.derived["fw_sigma"] = fw_json;
  doc.derived["sp"] = {{"series", to_json(sp_series)}, {"verdict", verdict_name(sp_v)}};
  doc.derived["empirical_norm"] = {{"series", to_json(emp_series)}, {"verdict", verdict_name(emp_v)}};
  const bool emp_stable = emp_v == SeriesVerdict::Stable;
  doc.derived["verdict"] = !hypothesis ? "hypothesis-unmet" : emp_stable ? "theorem-consistent" : "inconsistent";
  doc.implies("empirical norm stable when every sigma_i fw and sp are stable", hypothesis, emp_stable);
  return doc;
}

}  // namespace weightlab
