#pragma once

#include <weightlab/grid.hpp>

#include "oracle.hpp"

namespace testing_support {

inline oracle::Field to_oracle(const weightlab::CellField& f) {
  oracle::Field out;
  out.n = f.grid().cells_per_side();
  out.dim = f.grid().dim();
  out.v.assign(f.values().begin(), f.values().end());
  return out;
}

inline bool same_cube(const weightlab::Cube& c, const oracle::Box& b) {
  return c.anchor[0] == b.a0 && c.anchor[1] == b.a1 && c.side == b.side;
}

inline std::vector<oracle::Box> oracle_family(const weightlab::Grid& g, const weightlab::CubeFamily& fam) {
  return oracle::cubes(g.cells_per_side(), g.dim(), fam.kind == weightlab::FamilyKind::Dyadic, fam.min_side_cells);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
