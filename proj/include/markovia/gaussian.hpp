#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "markovia/relation.hpp"
#include "markovia/report.hpp"

namespace markovia {

// ---------------------------------------------------------------------------
// Finite-dimensional Gaussian primitives
// ---------------------------------------------------------------------------

struct ConditionalResult {
    Eigen::MatrixXd coeffs;  // regression coefficients of A on B
    Eigen::MatrixXd cov;     // conditional covariance of A given B
};

// Inverse of a symmetric positive definite matrix via its eigendecomposition.
// Throws NumericError (carrying lambda_min) when the matrix is not positive
// definite or its condition number exceeds cond_cap.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& s, double cond_cap = 1e12);

ConditionalResult gaussian_conditional(const Eigen::MatrixXd& sigma, const std::vector<int>& a,
                                       const std::vector<int>& b, double cond_cap = 1e12);

Eigen::MatrixXd precision_matrix(const Eigen::MatrixXd& sigma, double cond_cap = 1e12);

// rho_ij = -p_ij / sqrt(p_ii p_jj) off the diagonal, 1 on it.
Eigen::MatrixXd partial_correlations(const Eigen::MatrixXd& precision);

// Largest absolute entry of the cross block of the conditional covariance of
// (a u b) given c; zero means conditional independence for a Gaussian vector.
double gaussian_ci_distance(const Eigen::MatrixXd& sigma, Mask a, Mask b, Mask c,
                            double cond_cap = 1e12);

CIRelation relation_from_gaussian(const Eigen::MatrixXd& sigma, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Covariance models over a countable index set
// ---------------------------------------------------------------------------

class CovarianceModel {
public:
    virtual ~CovarianceModel() = default;
    virtual std::string kind() const = 0;
    // entry(i, j) with 0-based indices into the model's canonical ordering
    virtual double entry(int i, int j) const = 0;
    // largest admissible block size; 0 means the index set is unbounded
    virtual int finite_size() const { return 0; }
    Eigen::MatrixXd leading(int m) const;
};

class ExplicitModel : public CovarianceModel {
public:
    explicit ExplicitModel(Eigen::MatrixXd sigma);
    std::string kind() const override { return "explicit"; }
    double entry(int i, int j) const override;
    int size() const { return static_cast<int>(sigma_.rows()); }
    int finite_size() const override { return size(); }

private:
    Eigen::MatrixXd sigma_;
};

class DiagDominantModel : public CovarianceModel {
public:
    // Requires sigma_ii - sum_{j != i} |sigma_ij| >= margin for every row, so
    // the Gershgorin disks keep every eigenvalue at or above margin.
    DiagDominantModel(Eigen::MatrixXd sigma, double margin);
    std::string kind() const override { return "diag_dominant"; }
    double entry(int i, int j) const override;
    int size() const { return static_cast<int>(sigma_.rows()); }
    int finite_size() const override { return size(); }
    double margin() const { return margin_; }

private:
    Eigen::MatrixXd sigma_;
    double margin_;
};

// Autoregressive process of order N with unit innovation variance:
//   X_i = sum_{l=1..N} beta(i, l) X_{i-l} + eps_i,   X_k = 0 for k <= 0.
// The stability margin delta > 0 must satisfy sum_l |beta(i, l)| <= 1 - delta
// for every i (checked as rows are materialized; equality is allowed up to a
// 1e-12 slack).  Covariances come from X = Psi eps with
//   Psi(i, :) = e_i + sum_l beta(i, l) Psi(i-l, :).
class ArModel : public CovarianceModel {
public:
    using BetaFn = std::function<double(int i /*1-based*/, int lag /*1..order*/)>;

    ArModel(int order, double delta, std::vector<double> beta_const);
    ArModel(int order, double delta, BetaFn beta);
    std::string kind() const override { return "ar"; }
    double entry(int i, int j) const override;

    int order() const { return order_; }
    double delta() const { return delta_; }
    // |cov(X_i, X_j)| <= envelope_c * envelope_rho^{|i-j|}
    double envelope_c() const { return 1.0 / delta_; }
    double envelope_rho() const;

private:
    void ensure_rows(int m) const;

    int order_;
    double delta_;
    BetaFn beta_;
    mutable std::vector<std::vector<double>> psi_;  // psi_[i-1] holds columns 1..i
};

// Gaussian-kernel covariance on the integer lattice Z^d:
//   sigma(p, q) = exp(-|p - q|^2 / variance).
// Points are ordered by Chebyshev shell radius, then lexicographically, so the
// leading (2r+1)^d block covers the centered box of radius r.
class LatticeModel : public CovarianceModel {
public:
    LatticeModel(int dim, double variance);
    std::string kind() const override { return "lattice"; }
    double entry(int i, int j) const override;

    int dim() const { return dim_; }
    double variance() const { return variance_; }
    int shell_point_count(int radius) const;
    const std::vector<int>& point(int index) const;

private:
    void ensure_points(int count) const;

    int dim_;
    double variance_;
    mutable std::vector<std::vector<int>> points_;
    mutable int built_radius_ = -1;
};

// ---------------------------------------------------------------------------
// Fourier-symbol certificate for the lattice kernel
// ---------------------------------------------------------------------------

// Axis symbol g(x) = 1 + 2 sum_{j>=1} exp(-j^2/V) cos(jx), truncated at an
// order J with a certified geometric tail bound.  The grid minimum over
// [0, pi] is lowered by the Lipschitz slack L*h/2 and the tail, yielding a
// certified lower bound m_g; the symbol maximum sits at x = 0.  For the
// d-dimensional separable kernel the spectrum of every finite section lies in
// [m_g^d, M_g^d] whenever m_g > 0.
struct SymbolCertificate {
    double variance = 0.0;
    int dim = 1;
    int order = 0;          // truncation order J
    double tail = 0.0;      // bound on the dropped series mass
    double lipschitz = 0.0; // L_J = 2 sum_{j<=J} j exp(-j^2/V)
    int64_t grid = 0;
    double m_g = 0.0;       // certified axis-symbol lower bound
    double M_g = 0.0;       // certified axis-symbol upper bound
    bool certified = false; // m_g > 0
    double m_f = 0.0;       // m_g^d when certified, else 0
    double M_f = 0.0;       // M_g^d
};

double symbol_tail_bound(int order, double variance);
int symbol_min_order(double variance, double eps = 1e-12);
SymbolCertificate symbol_certificate(double variance, int dim, int64_t grid = int64_t(1) << 20,
                                     int order = 0 /* 0 = auto */);

// ---------------------------------------------------------------------------
// Certified series helpers (upper bounds with explicit remainders)
// ---------------------------------------------------------------------------
namespace series {

// sum_{s>=1} rho^{2s} (1+2s)^{2p}
double s_poly(double rho, int p);
// sum_{t>=1} rho^t (1+t)^p
double t_poly(double rho, int p);
// sum_{u>=1} rho^{2u} (1+u)^{2p}
double q_poly(double rho, int p);
// max_{s>=0} rho^s (1+s)^p
double phi_max(double rho, int p);
// sum_{k=1..K} k^eps
double power_weight_sum(int k_max, double eps);
// sum_{k>K} c rho^{k-row} (1+k-row)^p k^eps   (row is 1-based, row <= K)
double envelope_tail_weighted(double c, double rho, int p, int k_max, int row, double eps);

}  // namespace series

// ---------------------------------------------------------------------------
// Decay-table recursion  g_{n+1} = g_n + g_n g_n
// ---------------------------------------------------------------------------

// Truncated tables on [1..K]^2 with a per-level analytic envelope
//   g_n(i, j) <= env_c[n] * rho^{|i-j|} (1 + |i-j|)^{env_p[n]}
// and a scalar slack[n] bounding the truncation error of every table entry.
struct DecayTable {
    int K = 0;
    double c = 0.0;    // declared base envelope |cov(i,j)| <= c rho^{|i-j|}
    double rho = 0.0;
    std::vector<Eigen::MatrixXd> levels;  // g_0 .. g_L
    std::vector<double> env_c;
    std::vector<int> env_p;
    std::vector<double> slack;
};

DecayTable decay_table(const CovarianceModel& model, int k_trunc, int num_levels, double c,
                       double rho);

// Plain truncated weighted sum  sum_{k<=K} g_n(row, k) k^eps  (row 1-based).
double decay_row_weighted_sum(const DecayTable& t, int level, int row, double eps);

// Certified upper bound on the untruncated weighted sum: adds the table slack
// over [1..K] and the analytic envelope tail over k > K.
double decay_certified_weighted_sum(const DecayTable& t, int level, int row, double eps);

// ---------------------------------------------------------------------------
// Report-producing verifiers
// ---------------------------------------------------------------------------

// Spectrum checks on nested leading blocks: eigenvalue interlacing, the row-sum
// bound, partial-correlation ranges, plus model-specific conditions (symbol
// sandwich for lattice kernels, bandwidth/variance-cap/envelope for AR models,
// the Gershgorin floor for diagonally dominant matrices).
DiagnosticReport verify_covariance_conditions(const CovarianceModel& model,
                                              const std::vector<int>& sizes, double tol = 1e-8);

// Conditional covariance of the target block given growing prefixes of the
// remaining indices; reports a Cauchy tail criterion on max-norm differences.
// A non-Cauchy trace yields an inconclusive verdict, never a divergence claim.
DiagnosticReport conditional_convergence(const CovarianceModel& model,
                                         const std::vector<int>& targets, int steps,
                                         double tol = 1e-6, double cond_cap = 1e12);

}  // namespace markovia
