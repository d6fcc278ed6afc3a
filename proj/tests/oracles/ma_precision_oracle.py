#!/usr/bin/env python3
"""Independent oracle for the moving-average process precision closed form.

Process: B_i iid N(0,1), A_1 = B_1, A_k = B_k + alpha*B_{k-1} for k >= 2.
Covariance (1-based): Sigma[1][1] = 1, Sigma[k][k] = 1 + alpha^2 (k >= 2),
Sigma[k][k+1] = alpha, zero beyond the first off-diagonal.

Claimed closed form for the inverse (1-based i, k, size n):
  (Sigma_n^{-1})_{ik} = (-alpha)^{|i-k|} * sum_{r=0}^{n-max(i,k)} alpha^{2r}.

Derivation: A = L B with L unit lower bidiagonal (subdiagonal alpha), so
Sigma = L L^T and Sigma^{-1} = L^{-T} L^{-1} with (L^{-1})_{ij} = (-alpha)^{i-j}.
"""
import numpy as np


def sigma(n, a):
    S = np.zeros((n, n))
    for i in range(n):
        S[i, i] = 1.0 if i == 0 else 1 + a * a
        if i + 1 < n:
            S[i, i + 1] = S[i + 1, i] = a
    return S


def closed_form(n, a):
    P = np.zeros((n, n))
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            m = max(i, k)
            P[i - 1, k - 1] = (-a) ** abs(i - k) * sum(a ** (2 * r) for r in range(n - m + 1))
    return P


if __name__ == "__main__":
    worst = 0.0
    for n in range(2, 13):
        for a in [0.1, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.9]:
            err = np.max(np.abs(np.linalg.inv(sigma(n, a)) - closed_form(n, a)))
            worst = max(worst, err)
    print("worst |closed - inv| over n<=12, alpha grid:", worst)
    print("(Sigma_4^-1)[1,3] alpha=0.5:", closed_form(4, 0.5)[0, 2])
    print("(Sigma_5^-1)[1,3] alpha=0.5:", closed_form(5, 0.5)[0, 2])
    print("inv check 4:", np.linalg.inv(sigma(4, 0.5))[0, 2])
    print("inv check 5:", np.linalg.inv(sigma(5, 0.5))[0, 2])
