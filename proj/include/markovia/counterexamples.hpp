#pragma once

#include <Eigen/Dense>

#include "markovia/pmf.hpp"
#include "markovia/report.hpp"

namespace markovia {

// ---------------------------------------------------------------------------
// Parity process: pairwise-only conditional independence
// ---------------------------------------------------------------------------
// Variables 0..M built from independent sources Y0, Y1, Y2 ~ Bernoulli(p*)
// and an independent tail X4..XM ~ Bernoulli(tail_q).  With c_j the mod-2 sum
// of the tail entries at indices congruent to j (mod 3):
//   X1 = Y1 + c1,  X2 = Y2 + c2,  X3 = Y1 + Y2 + c3,  X0 = X1 + Y0  (mod 2).
// Each single pair (X0, X1), (X0, X2) is conditionally independent given the
// rest, but the joint statement X0 _||_ (X1, X2) | X3..XM fails with
// factorization distance 1/8 at the default parameters.
BinaryPmf parity_pmf(int m_top, double p0 = 0.25, double p1 = 0.25, double p2 = 0.25,
                     double tail_q = 0.25);

// Verifies the parity signature across truncations m_lo..m_hi and audits the
// intersection axiom on the smallest window: the full window must produce
// violations, every violation must span the whole window, and the canonical
// witness ({0},{1},{2..M},{}) must be among them.
DiagnosticReport parity_report(int m_lo = 7, int m_hi = 14, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Latent-offset process: Y_i = X_i + theta, theta ~ Bernoulli(1/2)
// ---------------------------------------------------------------------------
// w0(1-w0) at the reference observation y_B = 0, with lambda = 1' Sigma_B^-1 1.
double offset_posterior_variance_reference(double lambda);

// E[Var(theta | Y_B)] through the scalar log-likelihood-ratio mixture
// LLR ~ N(lambda/2, lambda); Simpson integration on a fixed grid.
double offset_posterior_variance_integrated(double lambda);

// Direct observation-space integrations for the iid base (cross-checks of the
// LLR route): one and two observed coordinates.
double offset_posterior_variance_direct1();
double offset_posterior_variance_direct2();

// Covariance of the moving-average base A_k = B_k + alpha B_{k-1}, A_1 = B_1.
Eigen::MatrixXd ma_covariance(int n, double alpha);

// Closed form for the inverse of ma_covariance:
//   (Sigma_n^-1)_{ik} = (-alpha)^{|i-k|} sum_{r=0}^{n-max(i,k)} alpha^{2r}.
Eigen::MatrixXd ma_precision_closed_form(int n, double alpha);

// Signature of the latent offset: pairwise covariance pinned at 1/4, the
// conditional covariance stays positive for every finite conditioning set,
// and the posterior variance decreases toward zero (information toward 1/4).
DiagnosticReport theta_shift_report(int k_max = 10, double tol = 1e-9);

// Closed-form precision for the moving-average base against direct inversion
// on an alpha grid, with spot values for growing sizes.
DiagnosticReport ma_shift_report(int n_max = 12, double tol = 1e-10);

}  // namespace markovia
