"""Independent reference values for the frozen constants in the test suite.

Everything here is computed from closed-form antiderivatives (or mpmath/scipy
quadrature) and plain dyadic brute force; nothing is shared with the C++ code.
Run: python3 tests/oracles/derive.py
"""
import math

import mpmath as mp
import numpy as np
from scipy import integrate

mp.mp.dps = 30


def logcalc_ratio(a, b, t):
    f = lambda s: s ** (-a) * mp.log(mp.e / s) ** (-b)
    val = mp.quad(f, [0, t * mp.mpf(2) ** -40, t / 2, t])
    return val / (t ** (1 - a) * mp.log(mp.e / t) ** (-b))


def centered_ap_w1(p, k):
    # w1 = 1/(|x| L^2) near 0; sigma = w1^(1-p') = (|x| L^2)^(1/(p-1)).
    t = mp.mpf(2) ** -k
    avg_w = 1 / (t * mp.log(mp.e / t))
    e = 1 / (p - 1)
    avg_s = mp.quad(lambda x: (x * mp.log(mp.e / x) ** 2) ** e, [0, t / 2, t]) / t
    return avg_w * avg_s ** (p - 1)


def power_cells(a, n, lo=-1.0, hi=1.0):
    """Exact cell averages of |x|^a on n cells of [lo, hi], a > -1."""
    edges = np.linspace(lo, hi, n + 1)
    F = lambda x: np.sign(x) * np.abs(x) ** (a + 1) / (a + 1)
    return (F(edges[1:]) - F(edges[:-1])) / (edges[1:] - edges[:-1])


def quad_cells(f, n, lo, hi, singular=()):
    edges = np.linspace(lo, hi, n + 1)
    out = np.empty(n)
    for i in range(n):
        x0, x1 = edges[i], edges[i + 1]
        pts = [s for s in singular if x0 < s < x1]
        v, _ = integrate.quad(f, x0, x1, points=pts or None, epsabs=0, epsrel=1e-13, limit=200)
        out[i] = v / (x1 - x0)
    return out


def dyadic_levels(v):
    """Cube averages per dyadic level: list of arrays, side 1, 2, 4, ..."""
    out = [v.copy()]
    while len(out[-1]) > 1:
        prev = out[-1]
        out.append(0.5 * (prev[0::2] + prev[1::2]))
    return out


def dyadic_sup(quotient_levels):
    return max(float(q.max()) for q in quotient_levels)


def ap(w, sigma, p):
    W, S = dyadic_levels(w), dyadic_levels(sigma)
    return dyadic_sup([W[j] * S[j] ** (p - 1) for j in range(len(W))])


def rh(w, ws, s):
    W, S = dyadic_levels(w), dyadic_levels(ws)
    return dyadic_sup([S[j] ** (1 / s) / W[j] for j in range(len(W))])


def a1(w):
    W = dyadic_levels(w)
    mins = [w.copy()]
    while len(mins[-1]) > 1:
        mins.append(np.minimum(mins[-1][0::2], mins[-1][1::2]))
    return dyadic_sup([W[j] / mins[j] for j in range(len(W))])


def fw(w):
    n = len(w)
    W = dyadic_levels(w)
    best = w.copy()  # best[x] = max over dyadic R inside Q containing x
    result = 1.0
    for j in range(len(W)):
        side = 1 << j
        best = np.maximum(best, np.repeat(W[j], side))
        sums = best.reshape(n // side, side).sum(axis=1)
        mass = w.reshape(n // side, side).sum(axis=1)
        result = max(result, float((sums / mass).max()))
    return result


def multrh(ws_list, s_list, prod):
    levels = [dyadic_levels(ws) for ws in ws_list]
    P = dyadic_levels(prod)
    quot = []
    for j in range(len(P)):
        num = np.ones_like(P[j])
        for L, s in zip(levels, s_list):
            num = num * L[j] ** (1 / s)
        quot.append(num / P[j])
    return dyadic_sup(quot)


def apvec(w, sigmas, p, conj):
    W = dyadic_levels(w)
    S = [dyadic_levels(s) for s in sigmas]
    quot = []
    for j in range(len(W)):
        v = W[j] ** (1 / p)
        for Si, c in zip(S, conj):
            v = v * Si[j] ** (1 / c)
        quot.append(v)
    return dyadic_sup(quot)


def sp_bruteforce(u, sigmas, pvec, h):
    """Dyadic S_p quotient by direct loops over cubes, cells and sub-cubes."""
    n = len(u)
    p = 1 / sum(1 / q for q in pvec)
    cubes = []
    side = 1
    while side <= n:
        cubes += [(a, side) for a in range(0, n, side)]
        side *= 2
    best = 0.0
    for a, s in cubes:
        total = 0.0
        for x in range(a, a + s):
            m = 0.0
            for b, r in cubes:
                if not (b <= x < b + r):
                    continue
                lo, hi = max(a, b), min(a + s, b + r)
                v = 1.0
                for sig in sigmas:
                    v *= sum(sig[lo:hi]) / r
                m = max(m, v)
            total += m ** p * u[x]
        den = 1.0
        for sig, q in zip(sigmas, pvec):
            den *= (sum(sig[a:a + s]) * h) ** (1 / q)
        best = max(best, (total * h) ** (1 / p) / den)
    return best


def main():
    print("logcalc ratios")
    for a, b in [(0.25, 1), (0.5, 2), (0.75, 3)]:
        vals = [logcalc_ratio(mp.mpf(a), b, mp.mpf(2) ** -k) for k in range(1, 21)]
        print(f"  a={a} b={b}: k=1 {mp.nstr(vals[0], 17)} k=10 {mp.nstr(vals[9], 17)} "
              f"k=20 {mp.nstr(vals[19], 17)} width {mp.nstr(max(vals) / min(vals), 10)}")
    print("  a=1/2 b=2 t=2^-10:", mp.nstr(logcalc_ratio(mp.mpf(0.5), 2, mp.mpf(2) ** -10), 17))

    print("centered A_p of w1")
    for p in (2, 3):
        for k in (10, 20):
            print(f"  p={p} k={k}: {mp.nstr(centered_ap_w1(mp.mpf(p), k), 17)}")

    print("A_2 of |x|^(1/2) and RH_2, dyadic on [-1,1]")
    for n in (1 << 12, 1 << 14):
        w = power_cells(0.5, n)
        print(f"  N={n}: ap {ap(w, power_cells(-0.5, n), 2.0):.15g} rh {rh(w, power_cells(1.0, n), 2.0):.15g}")

    print("FW of |x|^(-1/2), dyadic on [-1,1]")
    for n in (1 << 10, 1 << 12):
        print(f"  N={n}: {fw(power_cells(-0.5, n)):.15g}")

    print("A_1 of x^(-1/2) log(e/x)^(-2) on [0,1]")
    v = lambda x: x ** -0.5 * math.log(math.e / x) ** -2
    for n in (1 << 10, 1 << 12):
        print(f"  N={n}: {a1(quad_cells(v, n, 0.0, 1.0)):.15g}")

    print("multilinear RH: |x|^(1/4), |x|^(-1/8), s = (2, 2)")
    for n in (1 << 12, 1 << 14):
        r = multrh([power_cells(0.5, n), power_cells(-0.25, n)], [2, 2], power_cells(0.125, n))
        print(f"  N={n}: {r:.15g}")

    print("counterexample [w]_Ap on [-2,2], p1 = p2 = 2")
    L = lambda x: math.log(math.e / abs(x))
    w_half = lambda x: (abs(x) * L(x) ** 2) ** -0.5 if abs(x) <= 1 else 1.0
    sig1 = lambda x: abs(x) * L(x) ** 2 if abs(x) <= 1 else 1.0
    for n in (1 << 12, 1 << 14):
        w = quad_cells(w_half, n, -2.0, 2.0, singular=(0.0, -1.0, 1.0))
        s1 = quad_cells(sig1, n, -2.0, 2.0, singular=(0.0, -1.0, 1.0))
        print(f"  N={n}: {apvec(w, [s1, np.ones(n)], 1.0, [2.0, 2.0]):.15g}")

    print("S_p with u = 1, sigma = (|x|^(-1/2), 1), p = (2, 2), N = 64")
    n = 64
    print(f"  {sp_bruteforce(np.ones(n), [power_cells(-0.5, n), np.ones(n)], [2.0, 2.0], 2.0 / n):.15g}")


if __name__ == "__main__":
    main()
