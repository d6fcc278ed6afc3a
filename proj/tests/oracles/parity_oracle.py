#!/usr/bin/env python3
"""Independent oracle for the parity-process counterexample.

Construction (truncation at M >= 7):
  Y0, Y1, Y2 independent Bernoulli(p0), (p1), (p2); tail X4..XM independent
  Bernoulli(q_k).  With c_j = sum of X_{3k+j} over tail indices congruent to
  j mod 3 (k >= 1), define
    X1 = Y1 + c1 (mod 2),  X2 = Y2 + c2 (mod 2),  X3 = Y1 + Y2 + c3 (mod 2),
    X0 = X1 + Y0 (mod 2).
Checks frozen into the C++ tests:
  (i)  X0 ci X1 | rest and X0 ci X2 | rest hold exactly,
  (ii) X0 ci (X1,X2) | X3..XM fails with factorization distance 0.125 and
       P(X0 = X1 | conditioning cell) = 3/4 on every positive cell,
  (iii) P5 (intersection) fails on the full window with witness
       ({0},{1},{2},{3..M}) and passes on every proper sub-window (M=7).
"""
import itertools
import numpy as np


def build_pmf(M, p0=0.25, p1=0.25, p2=0.25, tail_q=0.25):
    nvars = M + 1
    pmf = np.zeros(2 ** nvars)
    tails = list(range(4, M + 1))
    for bits in itertools.product([0, 1], repeat=3 + len(tails)):
        y0, y1, y2 = bits[0], bits[1], bits[2]
        tv = dict(zip(tails, bits[3:]))
        pr = (p0 if y0 else 1 - p0) * (p1 if y1 else 1 - p1) * (p2 if y2 else 1 - p2)
        for t in tails:
            pr *= tail_q if tv[t] else 1 - tail_q
        c = [0, 0, 0, 0]
        for t in tails:
            c[((t - 1) % 3) + 1] ^= tv[t]
        x = [0] * nvars
        x[1] = y1 ^ c[1]
        x[2] = y2 ^ c[2]
        x[3] = (y1 + y2 + c[3]) % 2
        x[0] = x[1] ^ y0
        for t in tails:
            x[t] = tv[t]
        idx = sum(x[i] << i for i in range(nvars))
        pmf[idx] += pr
    return pmf


def ci_distance(pmf, n, A, B, C):
    """max over positive-probability c-cells of max |P(a,b|c) - P(a|c)P(b|c)|."""
    amask = sum(1 << i for i in A)
    bmask = sum(1 << i for i in B)
    cmask = sum(1 << i for i in C)
    cells = {}
    for idx, p in enumerate(pmf):
        if p == 0:
            continue
        key = idx & cmask
        cells.setdefault(key, {})
        sub = cells[key]
        ab = (idx & amask, idx & bmask)
        sub[ab] = sub.get(ab, 0.0) + p
    dist = 0.0
    for key, sub in cells.items():
        tot = sum(sub.values())
        pa, pb = {}, {}
        for (a, b), p in sub.items():
            pa[a] = pa.get(a, 0.0) + p / tot
            pb[b] = pb.get(b, 0.0) + p / tot
        for a in pa:
            for b in pb:
                joint = sub.get((a, b), 0.0) / tot
                dist = max(dist, abs(joint - pa[a] * pb[b]))
    return dist


def holds(pmf, n, A, B, C, tol=1e-9):
    return ci_distance(pmf, n, A, B, C) <= tol


def p5_violations(pmf, n, window):
    """Exhaustive intersection-axiom check restricted to a window of variables."""
    w = sorted(window)
    viol = []
    for assign in itertools.product(range(5), repeat=len(w)):
        X = [w[i] for i, a in enumerate(assign) if a == 0]
        Y = [w[i] for i, a in enumerate(assign) if a == 1]
        Z = [w[i] for i, a in enumerate(assign) if a == 2]
        W = [w[i] for i, a in enumerate(assign) if a == 3]
        if not X or not Y or not Z:
            continue
        if holds(pmf, n, X, Y, Z + W) and holds(pmf, n, X, Z, Y + W):
            if not holds(pmf, n, X, Y + Z, W):
                viol.append((X, Y, Z, W))
    return viol


def cond_prob_equal(pmf, n, M):
    """min/max over positive cells of (X3..XM) of P(X0 == X1 | cell)."""
    cmask = sum(1 << i for i in range(3, M + 1))
    cells = {}
    for idx, p in enumerate(pmf):
        if p == 0:
            continue
        key = idx & cmask
        eq = ((idx >> 0) & 1) == ((idx >> 1) & 1)
        tot, same = cells.get(key, (0.0, 0.0))
        cells[key] = (tot + p, same + (p if eq else 0.0))
    vals = [s / t for t, s in cells.values()]
    return min(vals), max(vals)


if __name__ == "__main__":
    for M in range(7, 15):
        pmf = build_pmf(M)
        n = M + 1
        rest0 = [i for i in range(n) if i not in (0, 1)]
        rest1 = [i for i in range(n) if i not in (0, 2)]
        d1 = ci_distance(pmf, n, [0], [1], rest0)
        d2 = ci_distance(pmf, n, [0], [2], rest1)
        dj = ci_distance(pmf, n, [0], [1, 2], list(range(3, n)))
        lo, hi = cond_prob_equal(pmf, n, M)
        print(f"M={M} pair1={d1:.3e} pair2={d2:.3e} joint={dj:.10f} "
              f"P(X0=X1|cell) in [{lo:.10f},{hi:.10f}]")
    pmf = build_pmf(7)
    viol = p5_violations(pmf, 8, range(8))
    print("M=7 full-window P5 violations:", len(viol), "first:", viol[0] if viol else None)
    bad = []
    for size in range(2, 8):
        for w in itertools.combinations(range(8), size):
            if p5_violations(pmf, 8, w):
                bad.append(w)
    print("M=7 proper sub-windows with P5 violations:", bad)
    # variant: degenerate tail
    pmf0 = build_pmf(7, tail_q=1e-12)
    print("degenerate-tail joint distance:",
          f"{ci_distance(pmf0, 8, [0], [1, 2], list(range(3, 8))):.10f}")
    # variant: fair Y0 -> X0 decouples
    pmff = build_pmf(7, p0=0.5)
    print("fair-Y0 joint distance:",
          f"{ci_distance(pmff, 8, [0], [1, 2], list(range(3, 8))):.3e}")
