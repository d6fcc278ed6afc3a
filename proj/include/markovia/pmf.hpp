#pragma once

#include <vector>

#include "markovia/common.hpp"

namespace markovia {

// Exact pmf over binary variables 0..n-1; cell index bit i holds the value of
// variable i.  All inference is exhaustive; n is capped at 22 (~4M cells).
class BinaryPmf {
public:
    BinaryPmf(int n, std::vector<double> values);

    static BinaryPmf uniform(int n);
    // normalized i.i.d. uniforms bounded below by 0.01: strictly positive
    static BinaryPmf random_positive(int n, Rng& rng);

    int size() const { return n_; }
    double operator[](uint64_t cell) const { return p_[cell]; }
    const std::vector<double>& values() const { return p_; }
    uint64_t cells() const { return 1ull << n_; }

    double min_entry() const;
    double marginal(Mask vars, uint64_t assignment) const;  // assignment packed over `vars`
    BinaryPmf marginalize(Mask keep) const;                 // compact relabeling

    // Conditional-independence distance for A, B given C: the max over
    // conditioning cells c with positive marginal of
    //   max_{a,b} | P(a,b|c) - P(a|c) P(b|c) |.
    double ci_distance(Mask a, Mask b, Mask c) const;

    bool ci_holds(Mask a, Mask b, Mask c, double tol) const {
        return ci_distance(a, b, c) <= tol;
    }

private:
    int n_;
    std::vector<double> p_;
};

// Compresses the bits of x selected by mask into a dense low-order index.
inline uint64_t gather_bits(uint64_t x, Mask mask) {
    uint64_t out = 0;
    int k = 0;
    while (mask) {
        int b = lowest_bit(mask);
        mask &= mask - 1;
        out |= ((x >> b) & 1ull) << k;
        ++k;
    }
    return out;
}

// Inverse of gather_bits: spreads low-order bits of x to the mask positions.
inline uint64_t scatter_bits(uint64_t x, Mask mask) {
    uint64_t out = 0;
    int k = 0;
    while (mask) {
        int b = lowest_bit(mask);
        mask &= mask - 1;
        out |= ((x >> k) & 1ull) << b;
        ++k;
    }
    return out;
}

}  // namespace markovia
