#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weightlab/parallel.hpp"

namespace weightlab {

using Bounds = std::array<double, 2>;
using CellIndex = std::array<std::size_t, 2>;

// Uniform grid of N^dim cells over an axis-aligned box. N is a power of two so
// that dyadic cubes line up with cell boundaries.
class Grid {
 public:
  Grid();  // [0,1] with two cells
  Grid(int dim, Bounds lower, Bounds upper, std::size_t cells_per_side);

  static Grid interval(double lo, double hi, std::size_t cells);
  static Grid square(double lo, double hi, std::size_t cells_per_side);

  int dim() const noexcept { return dim_; }
  std::size_t cells_per_side() const noexcept { return n_; }
  // log2 of cells_per_side.
  int levels() const noexcept { return levels_; }
  std::size_t cell_count() const noexcept { return dim_ == 1 ? n_ : n_ * n_; }

  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  double cell_width(int axis) const { return (upper_[axis] - lower_[axis]) / static_cast<double>(n_); }
  double cell_volume() const;
  // Left edge of cell i along an axis; i == N gives the upper bound exactly.
  double cell_edge(int axis, std::size_t i) const;

  // Canonical cell order is lexicographic in (i0, i1).
  std::size_t linear(CellIndex cell) const noexcept { return dim_ == 1 ? cell[0] : cell[0] * n_ + cell[1]; }
  CellIndex unlinear(std::size_t index) const noexcept {
    return dim_ == 1 ? CellIndex{index, 0} : CellIndex{index / n_, index % n_};
  }

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  Bounds lower_;
  Bounds upper_;
  std::size_t n_;
  int levels_;
};

// Closed-open box of side_cells^dim cells; anchor is the lower corner.
struct Cube {
  CellIndex anchor{0, 0};
  std::size_t side = 1;

  auto operator<=>(const Cube&) const = default;
};

std::size_t cube_cells(const Cube& q, int dim) noexcept;
bool cube_in_grid(const Grid& grid, const Cube& q) noexcept;
bool cube_contains(const Cube& q, CellIndex cell, int dim) noexcept;
std::string describe(const Cube& q, int dim);

enum class FamilyKind { Dyadic, AllWindows };

std::string_view family_name(FamilyKind kind);
FamilyKind parse_family(std::string_view name);

struct CubeFamily {
  FamilyKind kind = FamilyKind::Dyadic;
  std::size_t min_side_cells = 1;

  static CubeFamily dyadic(std::size_t min_side = 1) { return {FamilyKind::Dyadic, min_side}; }
  static CubeFamily all_windows(std::size_t min_side = 1) { return {FamilyKind::AllWindows, min_side}; }

  bool operator==(const CubeFamily&) const = default;
};

// Random access to the cubes of a family in canonical order: increasing side,
// then lexicographic anchor. The position of a cube in that order is its
// ordinal, used everywhere for deterministic tie-breaking.
class CubeIndex {
 public:
  CubeIndex(const Grid& grid, const CubeFamily& family);

  const Grid& grid() const noexcept { return grid_; }
  const CubeFamily& family() const noexcept { return family_; }
  std::size_t size() const noexcept { return offsets_.back(); }
  std::span<const std::size_t> sides() const noexcept { return sides_; }
  // Ordinal of the first cube with sides()[k].
  std::size_t side_offset(std::size_t k) const noexcept { return offsets_[k]; }
  // Anchors per axis for sides()[k].
  std::size_t anchors_per_axis(std::size_t k) const noexcept { return per_axis_[k]; }
  std::size_t anchor_stride(std::size_t k) const noexcept {
    return family_.kind == FamilyKind::Dyadic ? sides_[k] : 1;
  }

  Cube at(std::size_t ordinal) const;

 private:
  Grid grid_;
  CubeFamily family_;
  std::vector<std::size_t> sides_;
  std::vector<std::size_t> per_axis_;
  std::vector<std::size_t> offsets_;
};

std::vector<Cube> enumerate_cubes(const Grid& grid, const CubeFamily& family);

// Unevaluated sum hi + lo carrying roughly twice the precision of a double.
struct WideSum {
  double hi = 0.0;
  double lo = 0.0;
};

// Immutable per-cell nonnegative values with summed-area prefix sums in
// double-double precision and a lazily built range-minimum index. Copies share
// the underlying storage.
class CellField {
 public:
  CellField(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept;
  std::span<const double> values() const noexcept;
  std::size_t size() const noexcept { return values().size(); }
  double operator[](std::size_t i) const noexcept { return values()[i]; }

  // Sum of cell values over the box [lo, hi) (cell indices per axis).
  double box_sum(CellIndex lo, CellIndex hi) const;
  double cube_sum(const Cube& q) const;
  double cube_average(const Cube& q) const;
  double cube_min(const Cube& q) const;
  double total() const;

  // Unchecked variants for hot loops over family cubes.
  double box_sum_unchecked(CellIndex lo, CellIndex hi) const noexcept;
  double cube_sum_unchecked(const Cube& q) const noexcept;
  double cube_min_unchecked(const Cube& q) const;

 private:
  struct Storage;
  std::shared_ptr<const Storage> storage_;
};

void require_same_grid(const Grid& a, const Grid& b, std::string_view what);

// Sweep of a per-cube quotient over a family. Ties keep the smaller ordinal.
struct Extremum {
  double value = 0.0;
  std::size_t ordinal = 0;
};

struct SweepResult {
  Extremum max;
  Extremum min;
};

inline bool improves_max(double candidate, std::size_t ordinal, const Extremum& best) {
  return candidate > best.value || (candidate == best.value && ordinal < best.ordinal);
}
inline bool improves_min(double candidate, std::size_t ordinal, const Extremum& best) {
  return candidate < best.value || (candidate == best.value && ordinal < best.ordinal);
}

template <class Quotient>
SweepResult sweep_family(const CubeIndex& index, Quotient&& quotient) {
  constexpr std::size_t grain = 2048;
  const std::size_t n = index.size();
  std::vector<SweepResult> partial(block_count(n, grain));
  for_each_block(n, grain, [&](std::size_t block, std::size_t begin, std::size_t end) {
    SweepResult local;
    for (std::size_t ord = begin; ord < end; ++ord) {
      const double v = quotient(index.at(ord), ord);
      if (ord == begin) {
        local.max = {v, ord};
        local.min = {v, ord};
        continue;
      }
      if (v > local.max.value) local.max = {v, ord};
      if (v < local.min.value) local.min = {v, ord};
    }
    partial[block] = local;
  });
  SweepResult result = partial.front();
  for (std::size_t b = 1; b < partial.size(); ++b) {
    if (improves_max(partial[b].max.value, partial[b].max.ordinal, result.max)) result.max = partial[b].max;
    if (improves_min(partial[b].min.value, partial[b].min.ordinal, result.min)) result.min = partial[b].min;
  }
  return result;
}

}  // namespace weightlab
