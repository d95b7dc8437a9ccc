#include "weightlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "weightlab/errors.hpp"

namespace weightlab {

std::string_view algorithm_name(MaximalAlgorithm algo) { return algo == MaximalAlgorithm::Naive ? "naive" : "fast"; }

MaximalAlgorithm parse_algorithm(std::string_view name) {
  if (name == "naive") return MaximalAlgorithm::Naive;
  if (name == "fast") return MaximalAlgorithm::Fast;
  throw PreconditionError("unknown maximal algorithm '" + std::string(name) + "'");
}

double product_of_box_averages(std::span<const CellField> f, CellIndex lo, CellIndex hi, double cells) noexcept {
  double prod = 1.0;
  bool tiny = false;
  for (const auto& fi : f) {
    const double avg = fi.box_sum_unchecked(lo, hi) / cells;
    if (!(avg > 0.0)) return 0.0;
    if (avg < 1e-300) tiny = true;
    prod *= avg;
  }
  if (!tiny) return prod;
  double log_prod = 0.0;
  for (const auto& fi : f) log_prod += std::log(fi.box_sum_unchecked(lo, hi) / cells);
  return std::exp(log_prod);
}

namespace {

void require_fields(std::span<const CellField> f) {
  if (f.empty()) throw ArityError("maximal operator needs at least one field");
  for (const auto& fi : f) require_same_grid(f.front().grid(), fi.grid(), "maximal operator");
}

double candidate(std::span<const CellField> f, const Cube& q, int dim) {
  const CellIndex hi{q.anchor[0] + q.side, dim == 1 ? 0 : q.anchor[1] + q.side};
  return product_of_box_averages(f, q.anchor, hi, static_cast<double>(cube_cells(q, dim)));
}

inline void raise_to(double& slot, double c) { slot = slot < c ? c : slot; }

// out[x] = max of c[a] over a in [x - window + 1, x], for x in [0, out.size()).
void sliding_max(std::span<const double> c, std::size_t window, std::span<double> out, std::deque<std::size_t>& dq) {
  dq.clear();
  for (std::size_t x = 0; x < out.size(); ++x) {
    if (x < c.size()) {
      while (!dq.empty() && c[dq.back()] <= c[x]) dq.pop_back();
      dq.push_back(x);
    }
    while (dq.front() + window <= x) dq.pop_front();
    out[x] = c[dq.front()];
  }
}

std::vector<double> naive_maximal(std::span<const CellField> f, const CubeIndex& index) {
  const Grid& g = index.grid();
  const int dim = g.dim();
  const std::size_t n = g.cells_per_side();
  std::vector<double> m(g.cell_count(), 0.0);
  const std::size_t grain = std::max<std::size_t>(1, n / 8);
  for_each_block(n, grain, [&](std::size_t, std::size_t r0, std::size_t r1) {
    for (std::size_t ord = 0; ord < index.size(); ++ord) {
      const Cube q = index.at(ord);
      if (q.anchor[0] >= r1 || q.anchor[0] + q.side <= r0) continue;
      const double c = candidate(f, q, dim);
      const std::size_t x_begin = std::max(q.anchor[0], r0);
      const std::size_t x_end = std::min(q.anchor[0] + q.side, r1);
      if (dim == 1) {
        for (std::size_t x = x_begin; x < x_end; ++x) raise_to(m[x], c);
      } else {
        for (std::size_t x = x_begin; x < x_end; ++x) {
          double* row = m.data() + x * n;
          for (std::size_t y = q.anchor[1]; y < q.anchor[1] + q.side; ++y) raise_to(row[y], c);
        }
      }
    }
  });
  return m;
}

std::vector<double> fast_dyadic(std::span<const CellField> f, const CubeIndex& index) {
  const Grid& g = index.grid();
  const int dim = g.dim();
  const std::size_t n = g.cells_per_side();
  std::vector<double> m(g.cell_count(), 0.0);
  for (std::size_t k = 0; k < index.sides().size(); ++k) {
    const std::size_t s = index.sides()[k];
    const std::size_t count = index.side_offset(k + 1) - index.side_offset(k);
    for_each_block(count, 256, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t local = begin; local < end; ++local) {
        const Cube q = index.at(index.side_offset(k) + local);
        const double c = candidate(f, q, dim);
        if (dim == 1) {
          for (std::size_t x = q.anchor[0]; x < q.anchor[0] + s; ++x) raise_to(m[x], c);
        } else {
          for (std::size_t x = q.anchor[0]; x < q.anchor[0] + s; ++x) {
            for (std::size_t y = q.anchor[1]; y < q.anchor[1] + s; ++y) raise_to(m[x * n + y], c);
          }
        }
      }
    });
  }
  return m;
}

std::vector<double> fast_windows_1d(std::span<const CellField> f, const CubeIndex& index) {
  const std::size_t n = index.grid().cells_per_side();
  const auto sides = index.sides();
  std::vector<double> totals;
  for (const auto& fi : f) totals.push_back(fi.total());

  constexpr std::size_t grain = 64;
  std::vector<std::vector<double>> partial(block_count(sides.size(), grain));
  for_each_block(sides.size(), grain, [&](std::size_t block, std::size_t begin, std::size_t end) {
    std::vector<double> m(n, 0.0);
    std::vector<double> cand(n);
    std::vector<double> slide(n);
    std::deque<std::size_t> dq;
    double floor = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t s = sides[k];
      // Every window of side s has average <= total / s; skip sides that
      // cannot raise the current minimum.
      double bound = 1.0;
      for (double t : totals) bound *= t / static_cast<double>(s);
      if (bound * (1.0 + 1e-12) < floor) continue;
      const std::size_t anchors = n - s + 1;
      for (std::size_t a = 0; a < anchors; ++a) {
        cand[a] = product_of_box_averages(f, {a, 0}, {a + s, 0}, static_cast<double>(s));
      }
      sliding_max(std::span<const double>(cand.data(), anchors), s, slide, dq);
      floor = INFINITY;
      for (std::size_t x = 0; x < n; ++x) {
        raise_to(m[x], slide[x]);
        floor = std::min(floor, m[x]);
      }
    }
    partial[block] = std::move(m);
  });
  std::vector<double> m(n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t x = 0; x < n; ++x) raise_to(m[x], p[x]);
  }
  return m;
}

std::vector<double> fast_windows_2d(std::span<const CellField> f, const CubeIndex& index) {
  const std::size_t n = index.grid().cells_per_side();
  const auto sides = index.sides();
  std::vector<std::vector<double>> partial(sides.size());
  for_each_block(sides.size(), 1, [&](std::size_t k, std::size_t, std::size_t) {
    const std::size_t s = sides[k];
    const std::size_t anchors = n - s + 1;
    const double cells = static_cast<double>(s * s);
    std::vector<double> cand(anchors * anchors);
    for (std::size_t a0 = 0; a0 < anchors; ++a0) {
      for (std::size_t a1 = 0; a1 < anchors; ++a1) {
        cand[a0 * anchors + a1] = product_of_box_averages(f, {a0, a1}, {a0 + s, a1 + s}, cells);
      }
    }
    std::deque<std::size_t> dq;
    std::vector<double> rows(anchors * n);
    for (std::size_t a0 = 0; a0 < anchors; ++a0) {
      sliding_max(std::span<const double>(cand.data() + a0 * anchors, anchors), s,
                  std::span<double>(rows.data() + a0 * n, n), dq);
    }
    std::vector<double> column(anchors);
    std::vector<double> out_column(n);
    std::vector<double> m(n * n);
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t a0 = 0; a0 < anchors; ++a0) column[a0] = rows[a0 * n + y];
      sliding_max(column, s, out_column, dq);
      for (std::size_t x = 0; x < n; ++x) m[x * n + y] = out_column[x];
    }
    partial[k] = std::move(m);
  });
  std::vector<double> m(n * n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < m.size(); ++i) raise_to(m[i], p[i]);
  }
  return m;
}

}  // namespace

MaximalResult mult_maximal(std::span<const CellField> f, const CubeFamily& family, MaximalAlgorithm algorithm) {
  require_fields(f);
  const Grid& g = f.front().grid();
  const CubeIndex index(g, family);
  std::vector<double> m;
  if (algorithm == MaximalAlgorithm::Naive) {
    m = naive_maximal(f, index);
  } else if (family.kind == FamilyKind::Dyadic) {
    m = fast_dyadic(f, index);
  } else if (g.dim() == 1) {
    m = fast_windows_1d(f, index);
  } else {
    m = fast_windows_2d(f, index);
  }
  return {CellField(g, std::move(m)), family, algorithm};
}

namespace {

inline double weighted_term(double m, double power, double u) {
  return (power == 1.0 ? m : std::pow(m, power)) * u;
}

// Sums over each Q of M(f chi_Q)^power u, where M(f chi_Q) at x in Q is taken
// over family cubes R meeting Q with value prod sum_i(R n Q) / |R|. With
// contained_only, R ranges over cubes inside Q; the maxima agree because the
// part of R inside Q always lies in some family cube R' with R' in Q and
// |R'| <= |R|.
std::vector<double> generic_localized(std::span<const CellField> f, const CellField& u, double power,
                                      const CubeIndex& index, bool contained_only) {
  const Grid& g = index.grid();
  const int dim = g.dim();
  const std::size_t n = g.cells_per_side();
  std::vector<double> sums(index.size());
  for_each_block(index.size(), 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> local;
    for (std::size_t qo = begin; qo < end; ++qo) {
      const Cube q = index.at(qo);
      const std::size_t s = q.side;
      local.assign(dim == 1 ? s : s * s, 0.0);
      for (std::size_t ro = 0; ro < index.size(); ++ro) {
        const Cube r = index.at(ro);
        CellIndex lo{0, 0};
        CellIndex hi{0, 0};
        bool empty = false;
        bool inside = true;
        for (int axis = 0; axis < dim; ++axis) {
          lo[axis] = std::max(q.anchor[axis], r.anchor[axis]);
          hi[axis] = std::min(q.anchor[axis] + s, r.anchor[axis] + r.side);
          if (lo[axis] >= hi[axis]) empty = true;
          if (r.anchor[axis] < q.anchor[axis] || r.anchor[axis] + r.side > q.anchor[axis] + s) inside = false;
        }
        if (empty || (contained_only && !inside)) continue;
        const double c = product_of_box_averages(f, lo, hi, static_cast<double>(cube_cells(r, dim)));
        if (dim == 1) {
          for (std::size_t x = lo[0]; x < hi[0]; ++x) raise_to(local[x - q.anchor[0]], c);
        } else {
          for (std::size_t x = lo[0]; x < hi[0]; ++x) {
            for (std::size_t y = lo[1]; y < hi[1]; ++y) raise_to(local[(x - q.anchor[0]) * s + (y - q.anchor[1])], c);
          }
        }
      }
      CompensatedSum acc;
      if (dim == 1) {
        for (std::size_t x = 0; x < s; ++x) acc.add(weighted_term(local[x], power, u[q.anchor[0] + x]));
      } else {
        for (std::size_t x = 0; x < s; ++x) {
          for (std::size_t y = 0; y < s; ++y) {
            acc.add(weighted_term(local[x * s + y], power, u[(q.anchor[0] + x) * n + q.anchor[1] + y]));
          }
        }
      }
      sums[qo] = acc.value();
    }
  });
  return sums;
}

std::vector<double> dyadic_localized(std::span<const CellField> f, const CellField& u, double power,
                                     const CubeIndex& index) {
  const Grid& g = index.grid();
  const int dim = g.dim();
  const std::size_t n = g.cells_per_side();
  std::vector<double> sums(index.size());
  // running[x]: max of the candidates of the dyadic cubes containing x up to
  // the current level, which is M(f chi_Q)(x) for the current-level Q.
  std::vector<double> running(g.cell_count(), 0.0);
  for (std::size_t k = 0; k < index.sides().size(); ++k) {
    const std::size_t s = index.sides()[k];
    const std::size_t count = index.side_offset(k + 1) - index.side_offset(k);
    for_each_block(count, 64, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t local = begin; local < end; ++local) {
        const std::size_t ord = index.side_offset(k) + local;
        const Cube q = index.at(ord);
        const double c = candidate(f, q, dim);
        CompensatedSum acc;
        if (dim == 1) {
          for (std::size_t x = q.anchor[0]; x < q.anchor[0] + s; ++x) {
            raise_to(running[x], c);
            acc.add(weighted_term(running[x], power, u[x]));
          }
        } else {
          for (std::size_t x = q.anchor[0]; x < q.anchor[0] + s; ++x) {
            for (std::size_t y = q.anchor[1]; y < q.anchor[1] + s; ++y) {
              raise_to(running[x * n + y], c);
              acc.add(weighted_term(running[x * n + y], power, u[x * n + y]));
            }
          }
        }
        sums[ord] = acc.value();
      }
    });
  }
  return sums;
}

std::vector<double> windows_localized_1d(std::span<const CellField> f, const CellField& u, double power,
                                         const CubeIndex& index) {
  const std::size_t n = index.grid().cells_per_side();
  const std::size_t smin = index.sides().front();
  std::vector<double> sums(index.size());
  for_each_block(n - smin + 1, 8, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> m(n);
    for (std::size_t a = begin; a < end; ++a) {
      std::fill(m.begin(), m.end(), 0.0);
      for (std::size_t b = a + smin; b <= n; ++b) {
        // New windows [c, b) with c <= b - smin; x in [c, b) sees the best
        // of them through a running prefix maximum over c.
        double run = 0.0;
        CompensatedSum acc;
        for (std::size_t x = a; x < b; ++x) {
          if (x + smin <= b) {
            raise_to(run, product_of_box_averages(f, {x, 0}, {b, 0}, static_cast<double>(b - x)));
          }
          raise_to(m[x], run);
          acc.add(weighted_term(m[x], power, u[x]));
        }
        const std::size_t k = (b - a) - smin;
        sums[index.side_offset(k) + a] = acc.value();
      }
    }
  });
  return sums;
}

}  // namespace

std::vector<double> localized_maximal_sums(std::span<const CellField> f, const CellField& u, double power,
                                           const CubeIndex& index, MaximalAlgorithm algorithm) {
  require_fields(f);
  require_same_grid(index.grid(), f.front().grid(), "localized maximal sums");
  require_same_grid(index.grid(), u.grid(), "localized maximal sums");
  if (algorithm == MaximalAlgorithm::Naive) return generic_localized(f, u, power, index, false);
  if (index.family().kind == FamilyKind::Dyadic) return dyadic_localized(f, u, power, index);
  if (index.grid().dim() == 1) return windows_localized_1d(f, u, power, index);
  return generic_localized(f, u, power, index, true);
}

double lp_norm(const CellField& f, const CellField& u, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw PreconditionError("lp_norm exponent must lie in (0, inf)");
  require_same_grid(f.grid(), u.grid(), "lp_norm");
  CompensatedSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc.add(std::pow(f[i], p) * u[i]);
  return std::pow(acc.value() * f.grid().cell_volume(), 1.0 / p);
}

}  // namespace weightlab
