#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "weightlab/constants.hpp"
#include "weightlab/report.hpp"

namespace weightlab {

struct ProbeSet {
  bool indicators = true;       // f_i = chi_Q for every family cube Q
  std::size_t random_count = 0;  // dyadic step functions, values 2^U[-8,8]
  std::uint64_t seed = 0;
};

struct TwoWeightReport {
  ConstantReport sp;
  double empirical = 0.0;
  std::string probe;  // description of the best probe
  bool probe_is_indicator = false;
  Cube probe_cube;
  std::size_t probes_evaluated = 0;
  // empirical >= sp (1 - 1e-9).
  bool ordering_holds = false;
  bool probe_matches_sp_argmax = false;
};

// sup_Q (int_Q M(sigma chi_Q)^p u)^(1/p) / prod sigma_i(Q)^(1/p_i), with M over
// the same family.
ConstantReport sp_constant(const SampledWeight& u, std::span<const SampledWeight> sigmas, const ExponentVector& pvec,
                           const CubeFamily& family, MaximalAlgorithm algorithm = MaximalAlgorithm::Fast);

// Indicator probe ratio ||M(sigma chi_Q)||_{L^p(u)} / prod sigma_i(Q)^(1/p_i)
// for every family cube, by ordinal.
std::vector<double> indicator_ratios(const SampledWeight& u, std::span<const SampledWeight> sigmas,
                                     const ExponentVector& pvec, const CubeIndex& index);

// Ratio ||M(f sigma)||_{L^p(u)} / prod ||f_i||_{L^{p_i}(sigma_i)} for one tuple.
double probe_ratio(const SampledWeight& u, std::span<const SampledWeight> sigmas, std::span<const CellField> probes,
                   const ExponentVector& pvec, const CubeFamily& family);

// Empirical lower bound for the two-weight norm over the probe set, together
// with sp_constant.
TwoWeightReport empirical_norm(const SampledWeight& u, std::span<const SampledWeight> sigmas,
                               const ExponentVector& pvec, const CubeFamily& family, const ProbeSet& probes);

Json to_json(const TwoWeightReport& report);

// FW constants of each sigma_i, sp and the empirical norm along a ladder.
// Verdict "theorem-consistent" when every sigma_i and sp are stable and the
// empirical norm is stable too; "hypothesis-unmet" when some hypothesis
// series is not stable.
ReportDocument theorem19_scenario(std::span<const WeightSpec> sigma_specs, const WeightSpec& u_spec,
                                  const ExponentVector& pvec, const Ladder& ladder, const CubeFamily& family,
                                  const ProbeSet& probes, const QuadratureConfig& quad = {},
                                  const SeriesPolicy& policy = {});

}  // namespace weightlab
