#include <doctest.h>

#include <weightlab/constants.hpp>
#include <weightlab/errors.hpp>

#include <cmath>

#include "support.hpp"

using namespace weightlab;
using testing_support::same_cube;
using testing_support::to_oracle;

namespace {

const WeightSpec kW1 = WeightSpec::piecewise(-1, 1, WeightSpec::powlog(0, 1, 2), WeightSpec::constant(1));

WeightSpec power_weight(double a) { return WeightSpec::powlog(0, -a, 0); }

SampledWeight sampled_power(double a, std::size_t n, double lo = -1, double hi = 1) {
  return sample(power_weight(a), Grid::interval(lo, hi, n));
}

void check_against(const ConstantReport& r, const oracle::Sup& o, const std::vector<oracle::Box>& boxes) {
  CHECK(testing_support::rel_diff(r.value, o.value) <= 1e-12);
  CHECK(testing_support::rel_diff(r.floor, o.floor) <= 1e-12);
  CHECK(same_cube(r.argmax, boxes[o.arg]));
  CHECK(same_cube(r.argmin, boxes[o.argmin]));
}

}  // namespace

TEST_CASE("exponent vectors") {
  const ExponentVector v({2.0, 3.0, 6.0});
  CHECK(v.m() == 3);
  CHECK(v.p() == doctest::Approx(1.0));
  CHECK(v.conj(1) == doctest::Approx(1.5));
  CHECK(v.identity_residual() <= 1e-14);
  CHECK(v.p() <= 2.0);
  CHECK(conjugate(4.0) == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(ExponentVector({2.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(ExponentVector({}), ArityError);
  CHECK_THROWS_AS(conjugate(0.5), PreconditionError);
}

TEST_CASE("series classification") {
  using V = std::vector<SeriesPoint>;
  CHECK(classify_series(V{{1, 2.0}, {2, 2.05}}) == SeriesVerdict::Stable);
  CHECK(classify_series(V{{1, 2.0}, {2, 2.2}}) == SeriesVerdict::Unresolved);
  CHECK(classify_series(V{{1, 1.0}, {2, 2.0}, {4, 3.0}, {8, 4.0}}) == SeriesVerdict::Divergent);
  // One check only: 4 >= 1.5 * 3 fails, 3 >= 1.5 * 1 holds.
  CHECK(classify_series(V{{1, 1.0}, {2, 3.0}, {4, 3.1}, {8, 4.0}}) == SeriesVerdict::Unresolved);
  CHECK(classify_series(V{{1, 1.0}, {2, 1.2}, {4, 1.6}}) == SeriesVerdict::Divergent);
  CHECK(classify_series(V{{1, 1.0}, {2, INFINITY}}) == SeriesVerdict::Divergent);
  CHECK(classify_series(V{{1, 1.0}}) == SeriesVerdict::Unresolved);
  CHECK(last_change(V{{1, 2.0}, {2, 3.0}}) == doctest::Approx(0.5));
  CHECK(verdict_name(SeriesVerdict::Divergent) == "divergent");
  Ladder l;
  l.sizes = {1024, 512};
  CHECK_THROWS_AS(l.validate(), PreconditionError);
  l.sizes = {1000, 2000};
  CHECK_THROWS_AS(l.validate(), PreconditionError);
}

TEST_CASE("constant weights give one") {
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? Grid::interval(-1, 1, 64) : Grid::square(-1, 1, 16);
    const auto w = sample(WeightSpec::constant(2.5), g);
    for (auto fam : {CubeFamily::dyadic(), CubeFamily::all_windows()}) {
      CHECK(a1_constant(w, fam).value == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(ap_constant(w, dual_of(w, 3.0), 3.0, fam).value == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(rh_constant(w, power_of(w, 2.0), 2.0, fam).value == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(fw_constant(w, fam).value == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("every characteristic agrees with brute force") {
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? Grid::interval(-1, 1, 64) : Grid::square(-1, 1, 16);
    const auto w = random_weight(31, g, 0.5);
    const auto w2 = random_weight(32, g, 0.5);
    const ExponentVector pvec({2.0, 3.0});
    for (auto fam : {CubeFamily::dyadic(), CubeFamily::all_windows()}) {
      const auto boxes = testing_support::oracle_family(g, fam);
      const auto ow = to_oracle(w.field);
      check_against(a1_constant(w, fam), oracle::a1(ow, boxes), boxes);
      const auto sigma = dual_of(w, 2.5);
      check_against(ap_constant(w, sigma, 2.5, fam), oracle::ap(ow, to_oracle(sigma.field), 2.5, boxes), boxes);
      const auto ws = power_of(w, 1.7);
      check_against(rh_constant(w, ws, 1.7, fam), oracle::rh(ow, to_oracle(ws.field), 1.7, boxes), boxes);
      check_against(fw_constant(w, fam), oracle::fw(ow, boxes), boxes);
      check_against(fw_constant(w, fam, MaximalAlgorithm::Naive), oracle::fw(ow, boxes), boxes);
      const SampledWeight ws2[] = {w, w2};
      const SampledWeight duals[] = {dual_of(w, 2.0), dual_of(w2, 3.0)};
      const auto prod = product_weight(ws2, pvec);
      check_against(apvec_constant(ws2, duals, pvec, fam),
                    oracle::apvec(to_oracle(prod.field), {to_oracle(duals[0].field), to_oracle(duals[1].field)},
                                  pvec.p(), {pvec.conj(0), pvec.conj(1)}, boxes),
                    boxes);
    }
  }
}

TEST_CASE("power weights: reference values") {
  // Reference values: tests/oracles/derive.py (closed-form cell averages, dyadic brute force).
  for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 14}) {
    const auto w = sampled_power(0.5, n);
    CHECK(ap_constant(w, dual_of(w, 2.0), 2.0, CubeFamily::dyadic()).value ==
          doctest::Approx(1.33333333333333).epsilon(1e-10));
    CHECK(rh_constant(w, power_of(w, 2.0), 2.0, CubeFamily::dyadic()).value ==
          doctest::Approx(1.06066017177982).epsilon(1e-10));
  }
  CHECK(fw_constant(sampled_power(-0.5, 1024), CubeFamily::dyadic()).value ==
        doctest::Approx(1.67585678118655).epsilon(1e-10));
  CHECK(fw_constant(sampled_power(-0.5, 4096), CubeFamily::dyadic()).value ==
        doctest::Approx(1.69148178118655).epsilon(1e-10));
  const WeightSpec v = WeightSpec::powlog(0, 0.5, 2);
  CHECK(a1_constant(sample(v, Grid::interval(0, 1, 1024)), CubeFamily::dyadic()).value ==
        doctest::Approx(1.92263421485673).epsilon(1e-8));
  CHECK(a1_constant(sample(v, Grid::interval(0, 1, 4096)), CubeFamily::dyadic()).value ==
        doctest::Approx(1.92264821265619).epsilon(1e-8));
}

TEST_CASE("A_1 of x diverges under refinement") {
  std::vector<SeriesPoint> s;
  for (std::size_t n : {256, 1024, 4096, 16384})
    s.push_back({n, a1_constant(sampled_power(1.0, n, 0, 1), CubeFamily::dyadic()).value});
  CHECK(classify_series(s) == SeriesVerdict::Divergent);
}

TEST_CASE("centered A_p of the counterexample weight") {
  // Exact antiderivative for avg(w_1), mpmath quadrature for the dual (tests/oracles/derive.py).
  CHECK(centered_ap_value(kW1, 2.0, 0.0, 10) == doctest::Approx(4.4972559038950472).epsilon(1e-9));
  CHECK(centered_ap_value(kW1, 2.0, 0.0, 20) == doctest::Approx(7.9482921614145442).epsilon(1e-9));
  CHECK(centered_ap_value(kW1, 3.0, 0.0, 10) == doctest::Approx(4.1425958650824795).epsilon(1e-9));
  CHECK(centered_ap_value(kW1, 3.0, 0.0, 20) == doctest::Approx(7.2116354663620549).epsilon(1e-9));
  CHECK(centered_ap_value(kW1, 2.0, 0.0, 20) >= 1.5 * centered_ap_value(kW1, 2.0, 0.0, 10));
  CHECK_THROWS_AS(centered_rh_value(kW1, 2.0, 0.0, 10), IntegrabilityError);
  CHECK(centered_rh_value(power_weight(0.5), 2.0, 0.0, 10) == doctest::Approx(1.5 * std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("cube-by-cube inequalities") {
  const Grid g = Grid::interval(-1, 1, 512);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto w = random_weight(seed, g, 0.4);
    for (auto fam : {CubeFamily::dyadic(), CubeFamily::all_windows(16)}) {
      const double a2 = ap_constant(w, dual_of(w, 2.0), 2.0, fam).value;
      const double a4 = ap_constant(w, dual_of(w, 4.0), 4.0, fam).value;
      CHECK(a4 <= a2 * (1 + 1e-9));
      CHECK(ap_constant(w, dual_of(w, 2.0), 2.0, fam).floor >= 1 - 1e-9);
      CHECK(rh_constant(w, power_of(w, 3.0), 3.0, fam).floor >= 1 - 1e-9);
      CHECK(fw_constant(w, fam).floor >= 1 - 1e-9);
      const auto ladder = ap_ladder(w, fam);
      REQUIRE(ladder.size() == 4);
      for (std::size_t k = 1; k < 4; ++k) CHECK(ladder[k].value <= ladder[k - 1].value * (1 + 1e-9));
    }
  }
}

TEST_CASE("family and refinement monotonicity") {
  const WeightSpec w = WeightSpec::powlog(0.1, 0.5, 0);
  double prev = 0.0;
  for (std::size_t n : {64, 128, 256, 512}) {
    const auto s = sample(w, Grid::interval(-1, 1, n));
    const auto sigma = dual_of(s, 3.0);
    const double dy = ap_constant(s, sigma, 3.0, CubeFamily::dyadic()).value;
    const double all = ap_constant(s, sigma, 3.0, CubeFamily::all_windows()).value;
    CHECK(dy <= all);
    CHECK(dy >= prev);
    CHECK(fw_constant(s, CubeFamily::dyadic()).value <= fw_constant(s, CubeFamily::all_windows()).value);
    prev = dy;
  }
}

TEST_CASE("m = 1 reduction") {
  for (double p : {1.5, 2.0, 5.0}) {
    const auto w = sampled_power(0.3, 1024);
    const SampledWeight ws[] = {w};
    const SampledWeight duals[] = {dual_of(w, p)};
    const double vec = apvec_constant(ws, duals, ExponentVector({p}), CubeFamily::dyadic()).value;
    const double ap = ap_constant(w, duals[0], p, CubeFamily::dyadic()).value;
    CHECK(std::abs(vec - std::pow(ap, 1.0 / p)) <= 1e-12 * vec);
  }
}

TEST_CASE("per-cube Hoelder lower bound for product weights") {
  const Grid g = Grid::interval(-1, 1, 256);
  const ExponentVector pvec({2.0, 4.0});
  const SampledWeight ws[] = {random_weight(3, g, 0.5), random_weight(4, g, 0.5)};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto sigma = dual_of(ws[i], pvec.p_i(i));
    for (const auto& q : enumerate_cubes(g, CubeFamily::all_windows())) {
      const double v = std::pow(ws[i].field.cube_average(q), pvec.p() / pvec.p_i(i)) *
                       std::pow(sigma.field.cube_average(q), pvec.p() / pvec.conj(i));
      CHECK(v >= 1 - 1e-9);
    }
  }
}

TEST_CASE("dual modes are never mixed") {
  const Grid g = Grid::interval(-1, 1, 64);
  const auto w = sampled_power(0.5, 64);
  const auto other = sampled_power(0.25, 64);
  // A discrete dual of a spec sample is a discrete-mode pair, not a mixture.
  CHECK_NOTHROW(ap_constant(w, discrete_dual(w, 2.0), 2.0, CubeFamily::dyadic()));
  CHECK_THROWS_AS(ap_constant(w, discrete_dual(w, 3.0), 2.0, CubeFamily::dyadic()), ConsistencyError);
  CHECK_THROWS_AS(ap_constant(w, discrete_dual(other, 2.0), 2.0, CubeFamily::dyadic()), ConsistencyError);
  CHECK_THROWS_AS(ap_constant(w, dual_of(other, 2.0), 2.0, CubeFamily::dyadic()), ConsistencyError);
  CHECK_THROWS_AS(ap_constant(w, dual_of(w, 3.0), 2.0, CubeFamily::dyadic()), ConsistencyError);
  const auto r = random_weight(1, g, 0.3);
  CHECK_NOTHROW(ap_constant(r, discrete_dual(r, 2.0), 2.0, CubeFamily::dyadic()));
  CHECK_THROWS_AS(ap_constant(r, discrete_dual(random_weight(2, g, 0.3), 2.0), 2.0, CubeFamily::dyadic()),
                  ConsistencyError);
  CHECK_NOTHROW(rh_constant(w, discrete_power(w, 2.0), 2.0, CubeFamily::dyadic()));
  CHECK_THROWS_AS(rh_constant(w, discrete_power(w, 3.0), 2.0, CubeFamily::dyadic()), ConsistencyError);
  CHECK_THROWS_AS(rh_constant(w, power_of(other, 2.0), 2.0, CubeFamily::dyadic()), ConsistencyError);
  const SampledWeight ws[] = {w};
  const SampledWeight duals[] = {dual_of(w, 2.0)};
  CHECK_THROWS_AS(apvec_constant(ws, duals, ExponentVector({2.0, 2.0}), CubeFamily::dyadic()), ArityError);
}

TEST_CASE("lemma: A_p, RH_s and A_q together") {
  Ladder ladder;
  ladder.sizes = {1024, 4096, 16384};
  const auto one = lemma_jn_check(WeightSpec::constant(1), 2.0, 2.0, ladder, CubeFamily::dyadic());
  CHECK(one.consistent);
  CHECK(one.q == doctest::Approx(3.0));
  CHECK(one.ap.back().value == doctest::Approx(1.0));
  const auto quarter = lemma_jn_check(power_weight(0.25), 2.0, 2.0, ladder, CubeFamily::dyadic());
  CHECK(quarter.ap_verdict == SeriesVerdict::Stable);
  CHECK(quarter.rh_verdict == SeriesVerdict::Stable);
  CHECK(quarter.aq_verdict == SeriesVerdict::Stable);
  CHECK(quarter.consistent);
  const auto sing = lemma_jn_check(power_weight(-0.5), 2.0, 2.0, ladder, CubeFamily::dyadic());
  CHECK(sing.rh_verdict == SeriesVerdict::Divergent);
  CHECK(sing.aq_verdict == SeriesVerdict::Divergent);
  CHECK(sing.consistent);
}

TEST_CASE("infinite reports") {
  const auto r = infinite_report("rh", Grid::interval(0, 1, 8), CubeFamily::dyadic(), "not integrable");
  CHECK(std::isinf(r.value));
  CHECK(std::find(r.flags.begin(), r.flags.end(), "not-integrable") != r.flags.end());
}
