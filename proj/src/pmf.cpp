#include "markovia/pmf.hpp"

#include <cmath>

namespace markovia {

namespace {
constexpr int kMaxVars = 22;
}

BinaryPmf::BinaryPmf(int n, std::vector<double> values) : n_(n), p_(std::move(values)) {
    if (n < 1 || n > kMaxVars) throw SizeCapError("pmf variable count must be in [1, 22]");
    if (p_.size() != (1ull << n)) throw DomainError("pmf table size must be 2^n");
    double sum = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("pmf entries must be finite and nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("pmf must sum to 1 within 1e-12");
}

BinaryPmf BinaryPmf::uniform(int n) {
    return BinaryPmf(n, std::vector<double>(1ull << n, std::ldexp(1.0, -n)));
}

BinaryPmf BinaryPmf::random_positive(int n, Rng& rng) {
    std::vector<double> v(1ull << n);
    double sum = 0.0;
    for (auto& x : v) {
        x = 0.01 + rng.uniform();
        sum += x;
    }
    for (auto& x : v) x /= sum;
    // renormalize exactly enough for the constructor's 1e-12 gate
    double s2 = 0.0;
    for (double x : v) s2 += x;
    for (auto& x : v) x /= s2;
    return BinaryPmf(n, std::move(v));
}

double BinaryPmf::min_entry() const {
    double m = p_[0];
    for (double v : p_) m = std::min(m, v);
    return m;
}

double BinaryPmf::marginal(Mask vars, uint64_t assignment) const {
    double s = 0.0;
    for (uint64_t cell = 0; cell < cells(); ++cell)
        if (gather_bits(cell, vars) == assignment) s += p_[cell];
    return s;
}

BinaryPmf BinaryPmf::marginalize(Mask keep) const {
    int k = popcount(keep);
    if (k < 1) throw DomainError("marginalization must keep at least one variable");
    std::vector<double> out(1ull << k, 0.0);
    for (uint64_t cell = 0; cell < cells(); ++cell) out[gather_bits(cell, keep)] += p_[cell];
    double s = 0.0;
    for (double v : out) s += v;
    for (auto& v : out) v /= s;
    return BinaryPmf(k, std::move(out));
}

double BinaryPmf::ci_distance(Mask a, Mask b, Mask c) const {
    if (!a || !b) throw DomainError("independence statement blocks must be nonempty");
    if ((a & b) || (a & c) || (b & c)) throw DomainError("independence statement blocks must be disjoint");
    if ((a | b | c) & ~full_mask(n_)) throw DomainError("statement vertex out of range");
    const int na = popcount(a), nb = popcount(b), nc = popcount(c);
    std::vector<double> pc(1ull << nc, 0.0);
    std::vector<double> pac(1ull << (na + nc), 0.0);
    std::vector<double> pbc(1ull << (nb + nc), 0.0);
    std::vector<double> pabc(1ull << (na + nb + nc), 0.0);
    for (uint64_t cell = 0; cell < cells(); ++cell) {
        const double w = p_[cell];
        const uint64_t ia = gather_bits(cell, a);
        const uint64_t ib = gather_bits(cell, b);
        const uint64_t ic = gather_bits(cell, c);
        pc[ic] += w;
        pac[(ia << nc) | ic] += w;
        pbc[(ib << nc) | ic] += w;
        pabc[(((ia << nb) | ib) << nc) | ic] += w;
    }
    double dist = 0.0;
    for (uint64_t ic = 0; ic < pc.size(); ++ic) {
        if (pc[ic] <= 0.0) continue;
        for (uint64_t ia = 0; ia < (1ull << na); ++ia)
            for (uint64_t ib = 0; ib < (1ull << nb); ++ib) {
                const double joint = pabc[(((ia << nb) | ib) << nc) | ic] / pc[ic];
                const double prod = (pac[(ia << nc) | ic] / pc[ic]) * (pbc[(ib << nc) | ic] / pc[ic]);
                dist = std::max(dist, std::abs(joint - prod));
            }
    }
    return dist;
}

}  // namespace markovia
