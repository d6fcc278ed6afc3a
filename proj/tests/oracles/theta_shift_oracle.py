#!/usr/bin/env python3
"""Oracle for the shifted-process counterexample (latent theta in {0,1}, prior 1/2).

Y_i = X_i + theta with X ~ N(0, Sigma).  Facts frozen into C++ tests:
  * cov(Y_i, Y_j) = Var(theta) = 1/4 exactly (iid base).
  * Given Y_B = y_B, posterior w = P(theta=1|y_B) = sigmoid(LLR),
    LLR = 1^T Sigma_B^{-1} y_B - lambda/2,  lambda = 1^T Sigma_B^{-1} 1;
    Cov(Y_i,Y_j | y_B) = Sigma_{ij|B} + w(1-w) g_i g_j,
    g_i = 1 - Sigma_{iB} Sigma_B^{-1} 1.
  * Reference observation y_B = 0: w0 = 1/(1+exp(lambda/2)).
  * Integrated posterior variance E[Var(theta|Y_B)] via the 1-D LLR mixture
    LLR ~ 0.5 N(-l/2, l) + 0.5 N(l/2, l); strictly decreasing in k, positive;
    Var(E[theta|Y_B]) = 1/4 - E[Var] increases toward 1/4.
Cross-checked against direct 1-D/2-D integration in the observation space.
"""
import math
import numpy as np


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def integrated_posterior_var(lam, panels=200000, span=14.0):
    """E[w(1-w)] with LLR ~ N(lam/2, lam) (same under both mixture components)."""
    if lam == 0.0:
        return 0.25
    sd = math.sqrt(lam)
    lo, hi = lam / 2 - span * sd, lam / 2 + span * sd
    x = np.linspace(lo, hi, 2 * panels + 1)
    pdf = np.exp(-((x - lam / 2) ** 2) / (2 * lam)) / math.sqrt(2 * math.pi * lam)
    w = sigmoid(x)
    f = pdf * w * (1 - w)
    h = (hi - lo) / (2 * panels)
    weights = np.ones_like(x)
    weights[1:-1:2] = 4
    weights[2:-1:2] = 2
    return float(h / 3 * np.sum(weights * f))


def direct_iid_k1(panels=400000, span=16.0):
    """E[Var(theta|Y_1)] by direct integration over y (iid base, k=1)."""
    x = np.linspace(-span, 1 + span, 2 * panels + 1)
    phi0 = np.exp(-x ** 2 / 2) / math.sqrt(2 * math.pi)
    phi1 = np.exp(-(x - 1) ** 2 / 2) / math.sqrt(2 * math.pi)
    p = 0.5 * (phi0 + phi1)
    w = 0.5 * phi1 / p
    f = p * w * (1 - w)
    h = (x[-1] - x[0]) / (2 * panels)
    weights = np.ones_like(x)
    weights[1:-1:2] = 4
    weights[2:-1:2] = 2
    return float(h / 3 * np.sum(weights * f))


def direct_iid_k2(n=4001, span=10.0):
    """E[Var(theta|Y_1,Y_2)] by a 2-D grid (iid base, k=2)."""
    g = np.linspace(-span, 1 + span, n)
    h = g[1] - g[0]
    y1, y2 = np.meshgrid(g, g, indexing="ij")
    q0 = np.exp(-(y1 ** 2 + y2 ** 2) / 2) / (2 * math.pi)
    q1 = np.exp(-((y1 - 1) ** 2 + (y2 - 1) ** 2) / 2) / (2 * math.pi)
    p = 0.5 * (q0 + q1)
    w = 0.5 * q1 / p
    f = p * w * (1 - w)
    wts = np.ones(n)
    wts[1:-1:2] = 4
    wts[2:-1:2] = 2
    W = np.outer(wts, wts)
    return float((h / 3) ** 2 * np.sum(W * f))


def ma_sigma(n, a):
    s = np.zeros((n, n))
    for i in range(n):
        s[i, i] = 1.0 if i == 0 else 1 + a * a
        if i + 1 < n:
            s[i, i + 1] = s[i + 1, i] = a
    return s


if __name__ == "__main__":
    print("iid base: k, lambda=k, w0(1-w0), E[Var(theta|Y_B)], 1/4 - E[Var]")
    prev_ref = prev_int = 1.0
    for k in range(0, 11):
        lam = float(k)
        w0 = 1.0 / (1.0 + math.exp(lam / 2))
        ref = w0 * (1 - w0)
        iv = integrated_posterior_var(lam)
        assert ref < prev_ref + 1e-15 and iv < prev_int + 1e-15, "not decreasing"
        prev_ref, prev_int = ref, iv
        print(f"  k={k:2d} ref={ref:.12f} int={iv:.12f} info={0.25-iv:.12f}")

    print("k=4 closed form e^2/(1+e^2)^2 =", math.e ** 2 / (1 + math.e ** 2) ** 2)
    print("direct k=1:", f"{direct_iid_k1():.12f}",
          "llr k=1:", f"{integrated_posterior_var(1.0):.12f}")
    print("direct k=2:", f"{direct_iid_k2():.12f}",
          "llr k=2:", f"{integrated_posterior_var(2.0):.12f}")

    # MA(1) base, alpha=0.5: pair (0,1) 0-based, B = {2,...,1+k} within n=12
    a = 0.5
    n = 12
    S = ma_sigma(n, a)
    print("MA base alpha=0.5, pair (1,2) 1-based, conditioners 3..2+k:")
    for k in range(1, 11):
        B = list(range(2, 2 + k))
        SB = S[np.ix_(B, B)]
        SBinv = np.linalg.inv(SB)
        lam = float(np.ones(k) @ SBinv @ np.ones(k))
        w0 = 1.0 / (1.0 + math.exp(lam / 2))
        gi = 1.0 - float(S[0, B] @ SBinv @ np.ones(k))
        gj = 1.0 - float(S[1, B] @ SBinv @ np.ones(k))
        cond = S[np.ix_([0, 1], [0, 1])] - S[np.ix_([0, 1], B)] @ SBinv @ S[np.ix_(B, [0, 1])]
        total = cond[0, 1] + w0 * (1 - w0) * gi * gj
        print(f"  k={k:2d} lam={lam:.9f} base_cond={cond[0,1]:.9f} "
              f"mix_term={w0*(1-w0)*gi*gj:.9f} total={total:.9f}")
        assert w0 * (1 - w0) * gi * gj > 0
