#include "weightlab/series.hpp"

#include <cmath>

#include "weightlab/errors.hpp"

namespace weightlab {

std::string_view verdict_name(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Stable:
      return "stable";
    case SeriesVerdict::Divergent:
      return "divergent";
    case SeriesVerdict::Unresolved:
      break;
  }
  return "unresolved";
}

double last_change(std::span<const SeriesPoint> series) {
  if (series.size() < 2) return INFINITY;
  const double prev = series[series.size() - 2].value;
  const double last = series.back().value;
  if (!std::isfinite(prev) || !std::isfinite(last) || prev == 0.0) return INFINITY;
  return std::abs(last - prev) / prev;
}

SeriesVerdict classify_series(std::span<const SeriesPoint> series, const SeriesPolicy& policy) {
  for (const auto& pt : series) {
    if (!std::isfinite(pt.value)) return SeriesVerdict::Divergent;
  }
  const std::size_t len = series.size();
  if (len >= 3) {
    const std::size_t available = len - 2;
    const std::size_t needed = std::min<std::size_t>(static_cast<std::size_t>(std::max(policy.sustained, 1)), available);
    bool divergent = true;
    for (std::size_t c = 0; c < needed; ++c) {
      const std::size_t i = len - 1 - c;
      if (!(series[i].value >= policy.divergence_factor * series[i - 2].value)) divergent = false;
    }
    if (divergent) return SeriesVerdict::Divergent;
  }
  if (len >= 2 && last_change(series) <= policy.stable_change) return SeriesVerdict::Stable;
  return SeriesVerdict::Unresolved;
}

void Ladder::validate() const {
  if (sizes.empty()) throw PreconditionError("grid ladder is empty");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 2 || (sizes[k] & (sizes[k] - 1)) != 0) throw PreconditionError("grid ladder sizes must be powers of two");
    if (k > 0 && sizes[k] <= sizes[k - 1]) throw PreconditionError("grid ladder must strictly increase");
  }
  if (dim != 1 && dim != 2) throw PreconditionError("ladder dimension must be 1 or 2");
  if (!(lo < hi)) throw PreconditionError("ladder domain needs lo < hi");
}

Grid Ladder::grid(std::size_t k) const {
  return dim == 1 ? Grid::interval(lo, hi, sizes.at(k)) : Grid::square(lo, hi, sizes.at(k));
}

}  // namespace weightlab
