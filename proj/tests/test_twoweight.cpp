#include <doctest.h>

#include <weightlab/errors.hpp>
#include <weightlab/twoweight.hpp>

#include <cmath>

#include "support.hpp"

using namespace weightlab;
using testing_support::same_cube;
using testing_support::to_oracle;

namespace {

WeightSpec power_weight(double a) { return WeightSpec::powlog(0, -a, 0); }

SampledWeight scaled(const SampledWeight& w, double lambda) {
  std::vector<double> v(w.field.values().begin(), w.field.values().end());
  for (double& x : v) x *= lambda;
  return raw_weight(CellField(w.grid(), std::move(v)));
}

CellField indicator(const Grid& g, const Cube& q) {
  std::vector<double> v(g.cell_count(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = cube_contains(q, g.unlinear(k), g.dim()) ? 1.0 : 0.0;
  return CellField(g, std::move(v));
}

}  // namespace

TEST_CASE("unit weights") {
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? Grid::interval(0, 1, 16) : Grid::square(0, 1, 8);
    const auto one = sample(WeightSpec::constant(1), g);
    const SampledWeight s1[] = {one};
    const SampledWeight s2[] = {one, one};
    for (auto fam : {CubeFamily::dyadic(), CubeFamily::all_windows()}) {
      CHECK(sp_constant(one, s1, ExponentVector({3.0}), fam).value == doctest::Approx(1.0).epsilon(1e-12));
      const auto r = empirical_norm(one, s2, ExponentVector({2.0, 2.0}), fam, {});
      CHECK(r.sp.value == doctest::Approx(1.0).epsilon(1e-12));
      // M(chi_Q) is positive off Q, so only the whole-domain probe attains 1.
      CHECK(r.empirical >= 1.0);
      CHECK(r.ordering_holds);
    }
  }
}

TEST_CASE("sp against brute force") {
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? Grid::interval(-1, 1, 64) : Grid::square(-1, 1, 8);
    const auto u = random_weight(41, g, 0.5);
    const SampledWeight s[] = {random_weight(42, g, 0.5), random_weight(43, g, 0.5)};
    const ExponentVector pvec({2.0, 3.0});
    for (auto fam : {CubeFamily::dyadic(), CubeFamily::all_windows()}) {
      const auto boxes = testing_support::oracle_family(g, fam);
      const auto o = oracle::sp(to_oracle(u.field), {to_oracle(s[0].field), to_oracle(s[1].field)}, {2.0, 3.0},
                                g.cell_volume(), boxes);
      for (auto algo : {MaximalAlgorithm::Naive, MaximalAlgorithm::Fast}) {
        const auto r = sp_constant(u, s, pvec, fam, algo);
        CHECK(testing_support::rel_diff(r.value, o.value) <= 1e-12);
        CHECK(same_cube(r.argmax, boxes[o.arg]));
      }
    }
  }
}

TEST_CASE("sp reference value and refinement") {
  // u = 1, sigma = (|x|^-1/2, 1), p = (2, 2): brute-force Python oracle at N = 64.
  // On Q = [0, t] the quotient scales like t^(-1/4), so each 4x refinement
  // multiplies the dyadic supremum by sqrt 2.
  const ExponentVector pvec({2.0, 2.0});
  std::vector<SeriesPoint> series;
  for (std::size_t n : {64, 1024, 4096}) {
    const Grid g = Grid::interval(-1, 1, n);
    const auto u = sample(WeightSpec::constant(1), g);
    const SampledWeight s[] = {sample(power_weight(-0.5), g), u};
    series.push_back({n, sp_constant(u, s, pvec, CubeFamily::dyadic()).value});
  }
  CHECK(series[0].value == doctest::Approx(3.41421356237309).epsilon(1e-10));
  CHECK(series[2].value / series[1].value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(classify_series(series) == SeriesVerdict::Divergent);
}

TEST_CASE("indicator probes reproduce their closed form") {
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? Grid::interval(-1, 1, 32) : Grid::square(-1, 1, 8);
    const auto u = random_weight(5, g, 0.5);
    const SampledWeight s[] = {random_weight(6, g, 0.5), random_weight(7, g, 0.5)};
    const ExponentVector pvec({3.0, 1.5});
    for (auto fam : {CubeFamily::dyadic(), CubeFamily::all_windows()}) {
      const CubeIndex index(g, fam);
      const auto ratios = indicator_ratios(u, s, pvec, index);
      const auto sp = sp_constant(u, s, pvec, fam);
      for (std::size_t ord = 0; ord < index.size(); ord += 3) {
        const Cube q = index.at(ord);
        const CellField chi[] = {indicator(g, q), indicator(g, q)};
        CHECK(testing_support::rel_diff(ratios[ord], probe_ratio(u, s, chi, pvec, fam)) <= 1e-12);
      }
      double best = 0.0;
      for (double r : ratios) best = std::max(best, r);
      CHECK(best >= sp.value * (1 - 1e-9));
      // The whole domain has nothing outside it: equality there.
      const Cube whole{{0, 0}, g.cells_per_side()};
      const std::size_t last = index.size() - 1;
      REQUIRE(index.at(last) == whole);
      const CellField fields[] = {s[0].field, s[1].field};
      const double inside = localized_maximal_sums(fields, u.field, pvec.p(), index)[last];
      const double v = g.cell_volume();
      const double quotient = std::pow(inside * v, 1 / pvec.p()) / std::pow(s[0].field.total() * v, 1 / pvec.p_i(0)) /
                              std::pow(s[1].field.total() * v, 1 / pvec.p_i(1));
      CHECK(testing_support::rel_diff(ratios[last], quotient) <= 1e-12);
    }
  }
}

TEST_CASE("random probes") {
  const Grid g = Grid::interval(-1, 1, 256);
  const auto u = sample(WeightSpec::constant(1), g);
  const SampledWeight s[] = {sample(power_weight(0.25), g), sample(power_weight(-0.25), g)};
  ProbeSet probes;
  probes.random_count = 64;
  probes.seed = 3;
  const auto r = empirical_norm(u, s, ExponentVector({2.0, 2.0}), CubeFamily::dyadic(), probes);
  CHECK(r.probes_evaluated == 2 * 256 - 1 + 64);
  CHECK(r.ordering_holds);
  CHECK(std::isfinite(r.empirical));
  CHECK(std::isfinite(r.sp.value));
  probes.indicators = false;
  const auto only_random = empirical_norm(u, s, ExponentVector({2.0, 2.0}), CubeFamily::dyadic(), probes);
  CHECK(only_random.empirical <= r.empirical);
  CHECK(!only_random.probe_is_indicator);
  const auto again = empirical_norm(u, s, ExponentVector({2.0, 2.0}), CubeFamily::dyadic(), probes);
  CHECK(again.empirical == only_random.empirical);
}

TEST_CASE("scaling") {
  const Grid g = Grid::interval(-1, 1, 128);
  const auto u = random_weight(8, g, 0.4);
  const SampledWeight s[] = {random_weight(9, g, 0.4), random_weight(10, g, 0.4)};
  const ExponentVector pvec({2.0, 4.0});
  const auto base = empirical_norm(u, s, pvec, CubeFamily::dyadic(), {});
  const double lambda = 3.0;
  const auto up = empirical_norm(scaled(u, lambda), s, pvec, CubeFamily::dyadic(), {});
  const double factor = std::pow(lambda, 1.0 / pvec.p());
  CHECK(up.sp.value == doctest::Approx(base.sp.value * factor).epsilon(1e-12));
  CHECK(up.empirical == doctest::Approx(base.empirical * factor).epsilon(1e-12));
  const SampledWeight ss[] = {scaled(s[0], 5.0), s[1]};
  CHECK(empirical_norm(u, ss, pvec, CubeFamily::dyadic(), {}).ordering_holds);
}

TEST_CASE("dyadic family below all windows") {
  const Grid g = Grid::interval(-1, 1, 64);
  const auto u = random_weight(12, g, 0.5);
  const SampledWeight s[] = {random_weight(13, g, 0.5)};
  const ExponentVector pvec({2.0});
  CHECK(sp_constant(u, s, pvec, CubeFamily::dyadic()).value <=
        sp_constant(u, s, pvec, CubeFamily::all_windows()).value * (1 + 1e-12));
}

TEST_CASE("arity and grid checks") {
  const Grid g = Grid::interval(-1, 1, 16);
  const auto u = random_weight(1, g, 0.2);
  const SampledWeight s[] = {u};
  CHECK_THROWS_AS(sp_constant(u, s, ExponentVector({2.0, 2.0}), CubeFamily::dyadic()), ArityError);
  const SampledWeight other[] = {random_weight(1, Grid::interval(-1, 1, 32), 0.2)};
  CHECK_THROWS_AS(sp_constant(u, other, ExponentVector({2.0}), CubeFamily::dyadic()), GridMismatchError);
}

TEST_CASE("theorem scenario") {
  Ladder ladder;
  ladder.sizes = {64, 256, 1024};
  const ExponentVector pvec({2.0, 2.0});
  const WeightSpec ones[] = {WeightSpec::constant(1), WeightSpec::constant(1)};
  const auto trivial = theorem19_scenario(ones, WeightSpec::constant(1), pvec, ladder, CubeFamily::dyadic(), {});
  CHECK(trivial.passed());
  CHECK(trivial.derived["verdict"] == "theorem-consistent");

  const WeightSpec powers[] = {power_weight(0.25), power_weight(-0.25)};
  const WeightSpec u = WeightSpec::product({WeightSpec::power(powers[0], 0.5), WeightSpec::power(powers[1], 0.5)});
  const auto good = theorem19_scenario(powers, u, pvec, ladder, CubeFamily::dyadic(), {});
  CHECK(good.passed());
  CHECK(good.derived["verdict"] == "theorem-consistent");

  const WeightSpec bad[] = {WeightSpec::piecewise(-1, 1, WeightSpec::powlog(0, 1, 2), WeightSpec::constant(1)),
                            WeightSpec::constant(1)};
  Ladder wide = ladder;
  wide.lo = -2;
  wide.hi = 2;
  const auto unmet = theorem19_scenario(bad, WeightSpec::constant(1), pvec, wide, CubeFamily::dyadic(), {});
  CHECK(unmet.passed());
  CHECK(unmet.derived["verdict"] == "hypothesis-unmet");
  CHECK(!unmet.flags.empty());
}
