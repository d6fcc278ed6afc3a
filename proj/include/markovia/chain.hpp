#pragma once

#include <functional>
#include <vector>

#include "markovia/pmf.hpp"
#include "markovia/report.hpp"

namespace markovia {

// Inhomogeneous two-state Markov chain on coordinates 1..n:
//   pi1 = P(X_1 = 1),  p[r-1] = P(X_{r+1} = 1 | X_r = 1),
//   t[r-1] = P(X_{r+1} = 1 | X_r = 0)   for r = 1..n-1.
// All probabilities must be strictly inside (0, 1).
struct MarkovChainSpec {
    double pi1 = 0.5;
    std::vector<double> p;
    std::vector<double> t;

    int size() const { return static_cast<int>(p.size()) + 1; }
    void validate() const;
};

// Marginal P(X_k = 1) by the forward recursion pi_{k+1} = p_k pi_k + t_k (1 - pi_k).
double chain_marginal(const MarkovChainSpec& spec, int k);

// Exact path pmf of the truncation; cell bit t holds X_{t+1}.
BinaryPmf chain_pmf(const MarkovChainSpec& spec);

// Dispersion of the conditional prediction: with P = P(A | X_1..X_m, X_B)
// seen as a function of the prefix, returns Var(P | X_B = x_B) under the
// truncation pmf.  b_coords are 1-based; a zero-probability conditioning
// event raises DomainError.
double dcp_variance(const BinaryPmf& pmf, const std::function<bool(uint64_t)>& event, int m,
                    const std::vector<int>& b_coords, const std::vector<int>& b_values);

// prod_{r=m}^{n_prime-2} |p_r - t_r|; bounds dcp_variance whenever the
// conditioning coordinates sit inside {1..m-1} and the event only involves
// coordinates >= n_prime.
double dcp_product_bound(const MarkovChainSpec& spec, int m, int n_prime);

// Partial sums of (1 - |p_r - t_r|): unbounded growth certifies that the
// product bound vanishes.
std::vector<double> dcp_divergence_partials(const MarkovChainSpec& spec);

// Report for the CLI: dispersion of P(X_{n_prime} = 1 | prefix, X_B = x_B)
// against the product bound, plus the marginal-recursion cross-check.
DiagnosticReport chain_dcp_report(const MarkovChainSpec& spec, int m, int n_prime,
                                  const std::vector<int>& b_coords,
                                  const std::vector<int>& b_values, double tol = 1e-12);

// Exchangeable mixture of two coins (head probabilities a0, a1, equal weight):
// the standard example whose conditional prediction keeps positive dispersion
// at every horizon.
BinaryPmf coin_mixture_pmf(int n, double a0 = 0.25, double a1 = 0.75);

}  // namespace markovia
