#include "weightlab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "weightlab/errors.hpp"

namespace weightlab {

namespace {

WideSum two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

WideSum quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

WideSum add(WideSum x, WideSum y) {
  WideSum s = two_sum(x.hi, y.hi);
  WideSum t = two_sum(x.lo, y.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

WideSum negate(WideSum x) { return {-x.hi, -x.lo}; }

WideSum sub(WideSum x, WideSum y) { return add(x, negate(y)); }

double collapse(WideSum x) { return x.hi + x.lo; }

int floor_log2(std::size_t v) { return static_cast<int>(std::bit_width(v)) - 1; }

}  // namespace

// ---------------------------------------------------------------- Grid

Grid::Grid() : Grid(1, {0.0, 0.0}, {1.0, 1.0}, 2) {}

Grid::Grid(int dim, Bounds lower, Bounds upper, std::size_t cells_per_side)
    : dim_(dim), lower_(lower), upper_(upper), n_(cells_per_side), levels_(0) {
  if (dim != 1 && dim != 2) throw PreconditionError("grid dimension must be 1 or 2");
  if (n_ < 2 || !std::has_single_bit(n_)) {
    throw PreconditionError("cells per side must be a power of two >= 2, got " + std::to_string(n_));
  }
  if (dim == 2 && n_ > (std::size_t{1} << 10)) {
    throw PreconditionError("2D grids are limited to 1024 cells per side");
  }
  for (int axis = 0; axis < dim; ++axis) {
    if (!std::isfinite(lower_[axis]) || !std::isfinite(upper_[axis]) || !(upper_[axis] > lower_[axis])) {
      throw PreconditionError("grid bounds must be finite with upper > lower");
    }
  }
  if (dim == 1) {
    lower_[1] = 0.0;
    upper_[1] = 0.0;
  }
  levels_ = floor_log2(n_);
}

Grid Grid::interval(double lo, double hi, std::size_t cells) { return Grid(1, {lo, 0.0}, {hi, 0.0}, cells); }

Grid Grid::square(double lo, double hi, std::size_t cells_per_side) {
  return Grid(2, {lo, lo}, {hi, hi}, cells_per_side);
}

double Grid::cell_volume() const {
  double v = cell_width(0);
  if (dim_ == 2) v *= cell_width(1);
  return v;
}

double Grid::cell_edge(int axis, std::size_t i) const {
  if (i == n_) return upper_[axis];
  return lower_[axis] + (upper_[axis] - lower_[axis]) * (static_cast<double>(i) / static_cast<double>(n_));
}

// ---------------------------------------------------------------- Cube

std::size_t cube_cells(const Cube& q, int dim) noexcept { return dim == 1 ? q.side : q.side * q.side; }

bool cube_in_grid(const Grid& grid, const Cube& q) noexcept {
  const std::size_t n = grid.cells_per_side();
  if (q.side < 1 || q.side > n) return false;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    if (q.anchor[axis] > n - q.side) return false;
  }
  return grid.dim() == 2 || q.anchor[1] == 0;
}

bool cube_contains(const Cube& q, CellIndex cell, int dim) noexcept {
  for (int axis = 0; axis < dim; ++axis) {
    if (cell[axis] < q.anchor[axis] || cell[axis] >= q.anchor[axis] + q.side) return false;
  }
  return true;
}

std::string describe(const Cube& q, int dim) {
  std::ostringstream out;
  out << "anchor=(" << q.anchor[0];
  if (dim == 2) out << "," << q.anchor[1];
  out << ") side=" << q.side;
  return out.str();
}

std::string_view family_name(FamilyKind kind) { return kind == FamilyKind::Dyadic ? "dyadic" : "all"; }

FamilyKind parse_family(std::string_view name) {
  if (name == "dyadic") return FamilyKind::Dyadic;
  if (name == "all" || name == "allwindows") return FamilyKind::AllWindows;
  throw PreconditionError("unknown cube family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- CubeIndex

CubeIndex::CubeIndex(const Grid& grid, const CubeFamily& family) : grid_(grid), family_(family) {
  const std::size_t n = grid.cells_per_side();
  if (family.min_side_cells < 1) throw PreconditionError("min_side_cells must be >= 1");
  if (family.min_side_cells > n) {
    throw EmptyFamilyError("min_side_cells " + std::to_string(family.min_side_cells) + " exceeds grid size " +
                           std::to_string(n));
  }
  offsets_.push_back(0);
  auto add_side = [&](std::size_t side) {
    const std::size_t per_axis = family.kind == FamilyKind::Dyadic ? n / side : n - side + 1;
    const std::size_t count = grid.dim() == 1 ? per_axis : per_axis * per_axis;
    sides_.push_back(side);
    per_axis_.push_back(per_axis);
    offsets_.push_back(offsets_.back() + count);
  };
  if (family.kind == FamilyKind::Dyadic) {
    for (std::size_t side = 1; side <= n; side *= 2) {
      if (side >= family.min_side_cells) add_side(side);
    }
  } else {
    for (std::size_t side = family.min_side_cells; side <= n; ++side) add_side(side);
  }
  if (sides_.empty()) throw EmptyFamilyError("cube family is empty for this grid");
}

Cube CubeIndex::at(std::size_t ordinal) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), ordinal);
  const std::size_t k = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const std::size_t local = ordinal - offsets_[k];
  const std::size_t stride = anchor_stride(k);
  Cube q;
  q.side = sides_[k];
  if (grid_.dim() == 1) {
    q.anchor = {local * stride, 0};
  } else {
    q.anchor = {(local / per_axis_[k]) * stride, (local % per_axis_[k]) * stride};
  }
  return q;
}

std::vector<Cube> enumerate_cubes(const Grid& grid, const CubeFamily& family) {
  const CubeIndex index(grid, family);
  std::vector<Cube> cubes;
  cubes.reserve(index.size());
  for (std::size_t ord = 0; ord < index.size(); ++ord) cubes.push_back(index.at(ord));
  return cubes;
}

// ---------------------------------------------------------------- CellField

struct CellField::Storage {
  Grid grid;
  std::vector<double> values;
  // 1D: N+1 prefix sums. 2D: (N+1)^2 summed-area table, row-major.
  std::vector<WideSum> prefix;

  mutable std::once_flag min_once;
  // levels[k] holds minima of 2^k-cell runs (1D) or 2^k x 2^k blocks (2D).
  mutable std::vector<std::vector<double>> min_levels;

  void build_min_index() const {
    const std::size_t n = grid.cells_per_side();
    min_levels.clear();
    min_levels.push_back(values);
    if (grid.dim() == 1) {
      for (std::size_t len = 2; len <= n; len *= 2) {
        const auto& prev = min_levels.back();
        std::vector<double> cur(n - len + 1);
        for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = std::min(prev[i], prev[i + len / 2]);
        min_levels.push_back(std::move(cur));
      }
    } else {
      std::size_t prev_span = n;
      for (std::size_t len = 2; len <= n; len *= 2) {
        const auto& prev = min_levels.back();
        const std::size_t span = n - len + 1;
        const std::size_t h = len / 2;
        std::vector<double> cur(span * span);
        for (std::size_t i = 0; i < span; ++i) {
          for (std::size_t j = 0; j < span; ++j) {
            const double a = std::min(prev[i * prev_span + j], prev[i * prev_span + j + h]);
            const double b = std::min(prev[(i + h) * prev_span + j], prev[(i + h) * prev_span + j + h]);
            cur[i * span + j] = std::min(a, b);
          }
        }
        min_levels.push_back(std::move(cur));
        prev_span = span;
      }
    }
  }
};

CellField::CellField(Grid grid, std::vector<double> values) {
  if (values.size() != grid.cell_count()) {
    throw DomainError("field has " + std::to_string(values.size()) + " values, grid has " +
                      std::to_string(grid.cell_count()) + " cells");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw DomainError("field value at cell " + std::to_string(i) + " is negative or not finite");
    }
  }
  auto storage = std::make_shared<Storage>();
  storage->grid = grid;
  const std::size_t n = grid.cells_per_side();
  if (grid.dim() == 1) {
    storage->prefix.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) storage->prefix[i + 1] = add(storage->prefix[i], WideSum{values[i], 0.0});
  } else {
    const std::size_t w = n + 1;
    storage->prefix.resize(w * w);
    for (std::size_t i = 0; i < n; ++i) {
      WideSum row;
      for (std::size_t j = 0; j < n; ++j) {
        row = add(row, WideSum{values[i * n + j], 0.0});
        storage->prefix[(i + 1) * w + (j + 1)] = add(storage->prefix[i * w + (j + 1)], row);
      }
    }
  }
  storage->values = std::move(values);
  storage_ = std::move(storage);
}

const Grid& CellField::grid() const noexcept { return storage_->grid; }

std::span<const double> CellField::values() const noexcept { return storage_->values; }

double CellField::box_sum_unchecked(CellIndex lo, CellIndex hi) const noexcept {
  const auto& p = storage_->prefix;
  if (storage_->grid.dim() == 1) return collapse(sub(p[hi[0]], p[lo[0]]));
  const std::size_t w = storage_->grid.cells_per_side() + 1;
  const WideSum s = add(sub(p[hi[0] * w + hi[1]], p[lo[0] * w + hi[1]]), sub(p[lo[0] * w + lo[1]], p[hi[0] * w + lo[1]]));
  return collapse(s);
}

double CellField::box_sum(CellIndex lo, CellIndex hi) const {
  const Grid& g = grid();
  for (int axis = 0; axis < g.dim(); ++axis) {
    if (lo[axis] > hi[axis] || hi[axis] > g.cells_per_side()) throw DomainError("box outside grid");
  }
  if (g.dim() == 1) {
    lo[1] = 0;
    hi[1] = 0;
  }
  return box_sum_unchecked(lo, hi);
}

double CellField::cube_sum_unchecked(const Cube& q) const noexcept {
  return box_sum_unchecked(q.anchor, {q.anchor[0] + q.side, q.anchor[1] + q.side});
}

double CellField::cube_sum(const Cube& q) const {
  if (!cube_in_grid(grid(), q)) throw DomainError("cube " + describe(q, grid().dim()) + " outside grid");
  return cube_sum_unchecked(q);
}

double CellField::cube_average(const Cube& q) const {
  return cube_sum(q) / static_cast<double>(cube_cells(q, grid().dim()));
}

double CellField::cube_min_unchecked(const Cube& q) const {
  const Storage& s = *storage_;
  std::call_once(s.min_once, [&] { s.build_min_index(); });
  const int k = floor_log2(q.side);
  const std::size_t len = std::size_t{1} << k;
  const auto& level = s.min_levels[static_cast<std::size_t>(k)];
  if (s.grid.dim() == 1) return std::min(level[q.anchor[0]], level[q.anchor[0] + q.side - len]);
  const std::size_t span = s.grid.cells_per_side() - len + 1;
  const std::size_t i0 = q.anchor[0], i1 = q.anchor[0] + q.side - len;
  const std::size_t j0 = q.anchor[1], j1 = q.anchor[1] + q.side - len;
  return std::min(std::min(level[i0 * span + j0], level[i0 * span + j1]),
                  std::min(level[i1 * span + j0], level[i1 * span + j1]));
}

double CellField::cube_min(const Cube& q) const {
  if (!cube_in_grid(grid(), q)) throw DomainError("cube " + describe(q, grid().dim()) + " outside grid");
  return cube_min_unchecked(q);
}

double CellField::total() const {
  const std::size_t n = grid().cells_per_side();
  return box_sum_unchecked({0, 0}, {n, grid().dim() == 1 ? 0 : n});
}

void require_same_grid(const Grid& a, const Grid& b, std::string_view what) {
  if (!(a == b)) throw GridMismatchError(std::string(what) + ": fields live on different grids");
}

}  // namespace weightlab
