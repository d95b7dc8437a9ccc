#pragma once

#include <span>
#include <vector>

#include "weightlab/constants.hpp"
#include "weightlab/report.hpp"

namespace weightlab {

// sup_Q prod_i avg(numer_i)^(e_i) / avg(denom).
ConstantReport product_ratio(std::string name, std::span<const CellField> numer, std::span<const double> exponents,
                             const CellField& denom, const CubeFamily& family);

struct VerifyOptions {
  CubeFamily family = CubeFamily::dyadic();
  QuadratureConfig quad;
  SeriesPolicy policy;
};

// R = sup_Q prod (avg w_i^{s_i})^{1/s_i} / avg prod w_i, with sum 1/s_i = 1.
ReportDocument verify_multrh(std::span<const WeightSpec> w, std::span<const double> s, const Ladder& ladder,
                             const VerifyOptions& opt = {});

// R' = sup_Q prod (avg w_i)^{p/p_i} / avg prod w_i^{p/p_i}.
ReportDocument verify_cor_multrh(std::span<const WeightSpec> w, const ExponentVector& pvec, const Ladder& ladder,
                                 const VerifyOptions& opt = {});

// [w]_{A_p} <= prod [w_i]_{A_{p_i}}^{1/p_i} on one grid.
ReportDocument product_bound_check(std::span<const WeightSpec> w, const ExponentVector& pvec, const Grid& grid,
                                   const VerifyOptions& opt = {});

// Per level and i: [w_i]_{A_{p_i}}^{p/p_i} <= R' [w]_{A_p}^p.
ReportDocument theorem15_check(std::span<const WeightSpec> w, const ExponentVector& pvec, const Ladder& ladder,
                               const VerifyOptions& opt = {});

// FW constants of w = prod w_i^{p/p_i} and of every sigma_i against [w]_{A_p}.
ReportDocument theorem17_check(std::span<const WeightSpec> w, const ExponentVector& pvec, const Ladder& ladder,
                               const VerifyOptions& opt = {});

// The two-weight counterexample on [-2, 2] with p_1 = p_2. `scales` are the
// exponents k of the centered intervals [-2^-k, 2^-k] used for the A_{p_1}
// growth check.
ReportDocument counterexample_scenario(double p1, const Ladder& ladder, std::span<const int> scales,
                                       const VerifyOptions& opt = {});

// R with (s1, s2), [w_1]_{RH_{s1}}, [w_2]_{RH_{s2}}.
ReportDocument rh_complement_check(const WeightSpec& w1, const WeightSpec& w2, double s1, double s2,
                                   const Ladder& ladder, const VerifyOptions& opt = {});

ReportDocument lemma_jn_scenario(const WeightSpec& w, double p, double s, const Ladder& ladder,
                                 const VerifyOptions& opt = {});

// The counterexample's first weight.
WeightSpec counterexample_w1();
Ladder counterexample_ladder();

}  // namespace weightlab
