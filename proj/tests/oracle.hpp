#pragma once

// Brute-force reference implementations for the tests. Direct loops over
// cells and cubes only; no prefix sums, no pruning, no shared helpers with the
// library beyond reading the stored cell values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct Box {
  std::size_t a0 = 0;
  std::size_t a1 = 0;
  std::size_t side = 1;
};

struct Field {
  std::size_t n = 0;
  int dim = 1;
  std::vector<double> v;

  double at(std::size_t i0, std::size_t i1) const { return dim == 1 ? v[i0] : v[i0 * n + i1]; }
};

inline std::vector<Box> cubes(std::size_t n, int dim, bool dyadic, std::size_t min_side = 1) {
  std::vector<Box> out;
  for (std::size_t s = 1; s <= n; ++s) {
    if (dyadic && (s & (s - 1)) != 0) continue;
    if (s < min_side) continue;
    const std::size_t step = dyadic ? s : 1;
    for (std::size_t a0 = 0; a0 + s <= n; a0 += step) {
      if (dim == 1) {
        out.push_back({a0, 0, s});
        continue;
      }
      for (std::size_t a1 = 0; a1 + s <= n; a1 += step) out.push_back({a0, a1, s});
    }
  }
  return out;
}

inline double cells(const Box& q, int dim) { return dim == 1 ? double(q.side) : double(q.side * q.side); }

inline bool contains(const Box& q, std::size_t i0, std::size_t i1, int dim) {
  if (i0 < q.a0 || i0 >= q.a0 + q.side) return false;
  return dim == 1 || (i1 >= q.a1 && i1 < q.a1 + q.side);
}

// Sum of f over the intersection of two boxes (a whole box when r == q).
inline double sum_over(const Field& f, const Box& q, const Box& r) {
  const std::size_t lo0 = std::max(q.a0, r.a0), hi0 = std::min(q.a0 + q.side, r.a0 + r.side);
  std::size_t lo1 = 0, hi1 = 1;
  if (f.dim == 2) lo1 = std::max(q.a1, r.a1), hi1 = std::min(q.a1 + q.side, r.a1 + r.side);
  double s = 0.0;
  for (std::size_t i = lo0; i < hi0; ++i)
    for (std::size_t j = lo1; j < hi1; ++j) s += f.at(i, j);
  return s;
}

inline double sum(const Field& f, const Box& q) { return sum_over(f, q, q); }
inline double avg(const Field& f, const Box& q) { return sum(f, q) / cells(q, f.dim); }

inline double min(const Field& f, const Box& q) {
  double m = INFINITY;
  for (std::size_t i = q.a0; i < q.a0 + q.side; ++i)
    for (std::size_t j = f.dim == 1 ? 0 : q.a1; j < (f.dim == 1 ? 1 : q.a1 + q.side); ++j) m = std::min(m, f.at(i, j));
  return m;
}

inline bool overlaps(const Box& q, const Box& r, int dim) {
  if (q.a0 >= r.a0 + r.side || r.a0 >= q.a0 + q.side) return false;
  return dim == 1 || !(q.a1 >= r.a1 + r.side || r.a1 >= q.a1 + q.side);
}

// First maximum and first minimum in enumeration order.
struct Sup {
  double value = -INFINITY;
  std::size_t arg = 0;
  double floor = INFINITY;
  std::size_t argmin = 0;
};

template <class F>
Sup sup(const std::vector<Box>& family, F&& quotient) {
  Sup s;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const double v = quotient(family[k]);
    if (v > s.value) s.value = v, s.arg = k;
    if (v < s.floor) s.floor = v, s.argmin = k;
  }
  return s;
}

// M(f)(x) = max over family cubes R containing x of prod_i sum_{R cap Q} f_i / |R|
// restricted to a window Q (the whole grid when restrict_to is null).
inline std::vector<double> maximal(const std::vector<Field>& f, const std::vector<Box>& family,
                                   const Box* restrict_to = nullptr) {
  const Field& g = f.front();
  const std::size_t total = g.dim == 1 ? g.n : g.n * g.n;
  const Box whole{0, 0, g.n};
  const Box& q = restrict_to ? *restrict_to : whole;
  std::vector<double> m(total, 0.0);
  for (const Box& r : family) {
    if (!overlaps(q, r, g.dim)) continue;
    double v = 1.0;
    for (const Field& fi : f) v *= sum_over(fi, q, r) / cells(r, g.dim);
    for (std::size_t k = 0; k < total; ++k) {
      const std::size_t i0 = g.dim == 1 ? k : k / g.n, i1 = g.dim == 1 ? 0 : k % g.n;
      if (contains(r, i0, i1, g.dim) && contains(q, i0, i1, g.dim)) m[k] = std::max(m[k], v);
    }
  }
  return m;
}

inline Sup a1(const Field& w, const std::vector<Box>& fam) {
  return sup(fam, [&](const Box& q) { return avg(w, q) / min(w, q); });
}

inline Sup ap(const Field& w, const Field& sigma, double p, const std::vector<Box>& fam) {
  return sup(fam, [&](const Box& q) { return avg(w, q) * std::pow(avg(sigma, q), p - 1.0); });
}

inline Sup rh(const Field& w, const Field& ws, double s, const std::vector<Box>& fam) {
  return sup(fam, [&](const Box& q) { return std::pow(avg(ws, q), 1.0 / s) / avg(w, q); });
}

// sum over x in Q of M(f chi_Q)(x)^p u(x).
inline double localized(const std::vector<Field>& f, const Field& u, double p, const Box& q,
                        const std::vector<Box>& fam) {
  const std::vector<double> m = maximal(f, fam, &q);
  double s = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const std::size_t i0 = u.dim == 1 ? k : k / u.n, i1 = u.dim == 1 ? 0 : k % u.n;
    if (contains(q, i0, i1, u.dim)) s += std::pow(m[k], p) * u.v[k];
  }
  return s;
}

inline Sup fw(const Field& w, const std::vector<Box>& fam) {
  Field ones = w;
  std::fill(ones.v.begin(), ones.v.end(), 1.0);
  return sup(fam, [&](const Box& q) { return localized({w}, ones, 1.0, q, fam) / sum(w, q); });
}

inline Sup apvec(const Field& w, const std::vector<Field>& sigma, double p, const std::vector<double>& conj,
                 const std::vector<Box>& fam) {
  return sup(fam, [&](const Box& q) {
    double v = std::pow(avg(w, q), 1.0 / p);
    for (std::size_t i = 0; i < sigma.size(); ++i) v *= std::pow(avg(sigma[i], q), 1.0 / conj[i]);
    return v;
  });
}

inline Sup sp(const Field& u, const std::vector<Field>& sigma, const std::vector<double>& pvec, double volume,
              const std::vector<Box>& fam) {
  double inv = 0.0;
  for (double q : pvec) inv += 1.0 / q;
  const double p = 1.0 / inv;
  return sup(fam, [&](const Box& q) {
    double den = 1.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) den *= std::pow(sum(sigma[i], q) * volume, 1.0 / pvec[i]);
    return std::pow(localized(sigma, u, p, q, fam) * volume, 1.0 / p) / den;
  });
}

// sup_Q prod avg(numer_i)^e_i / avg(denom).
inline Sup product_ratio(const std::vector<Field>& numer, const std::vector<double>& e, const Field& denom,
                         const std::vector<Box>& fam) {
  return sup(fam, [&](const Box& q) {
    double v = 1.0;
    for (std::size_t i = 0; i < numer.size(); ++i) v *= std::pow(avg(numer[i], q), e[i]);
    return v / avg(denom, q);
  });
}

}  // namespace oracle
