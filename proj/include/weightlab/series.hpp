#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "weightlab/grid.hpp"

namespace weightlab {

// One value of a characteristic at a refinement level. Infinite values stand
// for integrability failures at that level.
struct SeriesPoint {
  std::size_t n;
  double value;
};

enum class SeriesVerdict { Stable, Divergent, Unresolved };

std::string_view verdict_name(SeriesVerdict v);

struct SeriesPolicy {
  // Stable: relative change between the two finest levels at most this.
  double stable_change = 0.05;
  // Divergent: v[i] >= factor * v[i-2] for `sustained` consecutive checks
  // ending at the finest level. Ladders too short for that many checks use
  // every check available.
  double divergence_factor = 1.5;
  int sustained = 2;
};

SeriesVerdict classify_series(std::span<const SeriesPoint> series, const SeriesPolicy& policy = {});

// Relative change |v_last - v_prev| / v_prev, or +inf if undefined.
double last_change(std::span<const SeriesPoint> series);

// Grid ladder of 1D or 2D grids on a common domain.
struct Ladder {
  std::vector<std::size_t> sizes{1024, 4096, 16384};
  int dim = 1;
  double lo = -1.0;
  double hi = 1.0;

  // Throws PreconditionError unless sizes strictly increase.
  void validate() const;
  Grid grid(std::size_t k) const;
};

}  // namespace weightlab
