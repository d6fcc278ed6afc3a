#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "markovia/pmf.hpp"
#include "markovia/report.hpp"

namespace markovia {

// Pairwise binary-lattice model on sites 1, 2, ... with a boundary site 0
// clamped to 1.  Unnormalized weight of x in {0,1}^n:
//   U(x) = exp( sum_{0<=i<j} theta_ij x_i x_j ),  x_0 = 1.
struct IsingEdge {
    int i = 0;
    int j = 0;
    double theta = 0.0;
};

// Edge list plus a declared interaction-mass regime.
//   finite:   only the listed edges exist (declared tail mass must be 0)
//   summable: edges beyond the list carry at most `tail_mass` total |theta|
//   sparse:   all couplings are <= 0 and the boundary field for site k
//             defaults to -2 ln k (listed boundary edges may be stronger);
//             the pairwise list must be finite and nonpositive
class IsingModel {
public:
    static IsingModel from_edges(std::vector<IsingEdge> edges, const std::string& regime,
                                 double tail_mass = 0.0);
    // Nearest-neighbour chain theta_{i,i+1} for i = 1..sites-1.  rate
    // "geometric" uses 2^-i with tail mass 2^{1-sites}; rate "harmonic"
    // (theta = 1/i) has divergent mass and is rejected by the regime guard.
    static IsingModel chain_family(const std::string& rate, int sites);

    double theta(int i, int j) const;
    int max_site() const { return max_site_; }
    const std::string& regime() const { return regime_; }
    double declared_tail_mass() const { return tail_mass_; }
    // total |theta| mass: listed edges plus the declared tail (finite/summable)
    double total_mass() const;
    // beta_n = sum_{j<n} |theta(n, j)|, boundary included
    double site_mass(int n) const;
    // coupled sites j with 1 <= j <= m (boundary excluded)
    std::vector<int> coupled_below(int site, int m) const;
    const std::vector<IsingEdge>& edges() const { return edges_; }

private:
    IsingModel() = default;
    std::vector<IsingEdge> edges_;
    std::map<std::pair<int, int>, double> lookup_;
    std::string regime_;
    double tail_mass_ = 0.0;
    int max_site_ = 0;
};

// Exact truncated table over sites 1..n (X_0 stays clamped, never enumerated);
// pmf cell bit t holds the value of site t+1.
BinaryPmf ising_exact(const IsingModel& model, int n);

// P(X_site = 1 | given values) = sigmoid(theta_{site,0} + sum theta coupled);
// only coupled sites may appear in `given` (locality), all of them must.
double ising_conditional(const IsingModel& model, int site,
                         const std::map<int, int>& given);

// Prefix ratio f(v, n) = P_n(prefix = v) / P_n(prefix = all-zero) for the
// truncation at n sites, computed as a ratio of tail sums scaled by the
// prefix weight exp(W(v)), W(v) = sum_{0<=i<j<=m} theta_ij v_i v_j, v_0 = 1.
double ising_prefix_ratio(const IsingModel& model, const std::vector<int>& prefix, int n);

// Marginal table built by exhaustive enumeration (the independent route used
// to cross-check ising_prefix_ratio).
std::vector<double> ising_prefix_marginals(const IsingModel& model, int m, int n);

// Truncation-convergence diagnostics for the length-m prefix:
//   * dual-route identity  f(v, n) == marginal ratio  (tol)
//   * step ratios alpha_n = f(v, n+1)/f(v, n) obey |alpha_n - 1| <= 2 beta_n
//     at every qualifying n (site n+1 uncoupled to sites 1..m; n >= m)
//   * marginal sandwich 1/(C 2^m) <= P(prefix) <= C/2^m, C = exp(2 mass)
//   * limit interval [f (1 - 2R), f exp(2R)] from the undelivered mass R
DiagnosticReport ising_convergence(const IsingModel& model, int m, int n_max,
                                   double tol = 1e-10);

DiagnosticReport ising_exact_report(const IsingModel& model, int n);

// Sparse-regime partial normalizer: supports inside [1..k_window] with at
// most max_support active sites, plus a certified bound on everything else
// (C = pi^2/6 dominates the per-site activation mass).
struct SparseNormalizer {
    double partial = 0.0;
    double tail_bound = 0.0;
    int k_window = 0;
    int max_support = 0;
};

SparseNormalizer sparse_normalizer(const IsingModel& model, int k_window, int max_support);

// Certified lower bound on P(X_site = 1): numerator supports forced to
// include `site`, denominator padded with the normalizer tail bound.
double sparse_conditional_floor(const IsingModel& model, int site, int k_window,
                                int max_support);

}  // namespace markovia
