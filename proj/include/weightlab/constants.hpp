#pragma once

#include <span>
#include <string>
#include <vector>

#include "weightlab/exponents.hpp"
#include "weightlab/grid.hpp"
#include "weightlab/maximal.hpp"
#include "weightlab/sampling.hpp"
#include "weightlab/series.hpp"

namespace weightlab {

// Supremum of a per-cube quotient over a family, with the attaining cube. The
// smallest quotient (floor) is kept as well: for every characteristic here it
// is >= 1 up to quadrature error, by Jensen or Hoelder on each cube.
struct ConstantReport {
  std::string characteristic;
  double value = 1.0;  // +inf when a required sample was not integrable
  Cube argmax;
  double floor = 1.0;
  Cube argmin;
  CubeFamily family;
  Grid grid;
  std::vector<SeriesPoint> refinement;
  std::vector<std::string> flags;
};

// Report for a characteristic that could not be evaluated because a required
// weight is not locally integrable.
ConstantReport infinite_report(std::string characteristic, const Grid& grid, const CubeFamily& family,
                               std::string reason);

// sup_Q avg(w) / min_Q(w).
ConstantReport a1_constant(const SampledWeight& w, const CubeFamily& family);
// sup_Q avg(w) avg(sigma)^(p-1); sigma must be the dual of w in the same mode.
ConstantReport ap_constant(const SampledWeight& w, const SampledWeight& sigma, double p, const CubeFamily& family);
// sup_Q avg(w^s)^(1/s) / avg(w); ws must be w^s in the same mode.
ConstantReport rh_constant(const SampledWeight& w, const SampledWeight& ws, double s, const CubeFamily& family);
// sup_Q (1/w(Q)) sum_{x in Q} M(w chi_Q)(x), M over the same family.
ConstantReport fw_constant(const SampledWeight& w, const CubeFamily& family,
                           MaximalAlgorithm algorithm = MaximalAlgorithm::Fast);
// sup_Q avg(w)^(1/p) prod avg(sigma_i)^(1/p_i'), w = prod w_i^(p/p_i).
ConstantReport apvec_constant(std::span<const SampledWeight> weights, std::span<const SampledWeight> duals,
                              const ExponentVector& pvec, const CubeFamily& family);
// A_p constants at p = 2, 4, 8, 16 with duals formed in the mode of w.
std::vector<ConstantReport> ap_ladder(const SampledWeight& w, const CubeFamily& family);

// Throws ConsistencyError unless `derived` is w^exponent in the mode of w:
// spec-level with the matching Power spec, or a discrete power of exactly
// these cell values. Two raw fields are accepted as given.
void require_power_of(const SampledWeight& w, const SampledWeight& derived, double exponent, std::string_view what);

// w^r in the mode of w (spec-level sample, or cellwise power).
SampledWeight power_of(const SampledWeight& w, double exponent);
// w^(1-p') in the mode of w.
SampledWeight dual_of(const SampledWeight& w, double p);
// prod w_i^(p/p_i): spec-level if every w_i is, cellwise otherwise.
SampledWeight product_weight(std::span<const SampledWeight> weights, const ExponentVector& pvec);

// Quotients on [c - 2^-k, c + 2^-k] straight from the spec, no grid.
double centered_ap_value(const WeightSpec& w, double p, double center, int k, const QuadratureConfig& quad = {});
double centered_rh_value(const WeightSpec& w, double s, double center, int k, const QuadratureConfig& quad = {});

struct LemmaJnReport {
  double p;
  double s;
  double q;  // s(p-1) + 1
  std::vector<SeriesPoint> ap;
  std::vector<SeriesPoint> rh;
  std::vector<SeriesPoint> aq;
  SeriesVerdict ap_verdict;
  SeriesVerdict rh_verdict;
  SeriesVerdict aq_verdict;
  bool consistent;
};

// [w]_{A_p}, [w]_{RH_s} and [w^s]_{A_q} along a ladder. Integrability
// failures enter the series as +inf.
LemmaJnReport lemma_jn_check(const WeightSpec& w, double p, double s, const Ladder& ladder, const CubeFamily& family,
                             const QuadratureConfig& quad = {}, const SeriesPolicy& policy = {});

}  // namespace weightlab
