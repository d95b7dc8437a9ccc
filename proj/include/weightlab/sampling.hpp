#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>

#include "weightlab/grid.hpp"
#include "weightlab/quadrature.hpp"
#include "weightlab/weight_spec.hpp"

namespace weightlab {

struct RawData {};

struct FromSpec {
  WeightSpec spec;
  QuadratureConfig quad;
};

// Cellwise power of another sampled weight, identified by its fingerprint.
struct DiscretePower {
  double exponent;
  std::uint64_t source_fingerprint;
};

using Provenance = std::variant<RawData, FromSpec, DiscretePower>;

struct SampledWeight {
  CellField field;
  Provenance provenance;

  const Grid& grid() const noexcept { return field.grid(); }
  const WeightSpec* spec() const noexcept;
  bool from_spec() const noexcept { return std::holds_alternative<FromSpec>(provenance); }
};

// Cell averages of the spec. Fails with IntegrabilityError for specs that are
// not locally integrable on the grid domain.
SampledWeight sample(const WeightSpec& spec, const Grid& grid, const QuadratureConfig& quad = {});
SampledWeight raw_weight(CellField field);

// Hash of the grid and the exact cell values.
std::uint64_t fingerprint(const CellField& field);

// Cellwise w^r.
SampledWeight discrete_power(const SampledWeight& w, double exponent);
// Cellwise w^(1 - p').
SampledWeight discrete_dual(const SampledWeight& w, double p);
// Cellwise prod w_i^(r_i).
CellField discrete_product(std::span<const CellField> fields, std::span<const double> exponents);

// exp of a mean-zero dyadic martingale: each split moves the log-value of the
// two (1D) or four (2D) children by amounts of size <= roughness that cancel
// on average. Level k of the construction is shared by all grids with at
// least 2^k cells per side.
SampledWeight random_weight(std::uint64_t seed, const Grid& grid, double roughness);

// Counter-based generator shared by all seeded constructions.
std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);
// Uniform in [-1, 1].
double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

// CSV: "# grid dim=<d> n=<N> lo=<..> hi=<..>" then one value per line in
// canonical cell order. 2D bounds are written as "lo=x,y".
void write_field_csv(std::ostream& out, const CellField& field);
CellField read_field_csv(std::istream& in);

}  // namespace weightlab
