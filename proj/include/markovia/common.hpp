#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace markovia {

// Error taxonomy: every failure mode surfaces as a typed exception so the CLI
// can map it to the exit-code contract (1 = usage/config, 2 = verdict fail,
// 3 = inconclusive; numeric/domain problems are reported, never swallowed).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct SizeCapError : Error {
    using Error::Error;
};
struct RegimeError : Error {
    using Error::Error;
};
struct NumericError : Error {
    double lambda_min;
    NumericError(const std::string& msg, double lmin) : Error(msg), lambda_min(lmin) {}
};

// Deterministic RNG wrapper: mt19937_64 output is specified by the standard,
// and the (x >> 11) * 2^-53 mapping avoids libc-dependent distributions, so
// seeded runs are byte-reproducible across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // modulo bias is irrelevant here (determinism is the requirement)
    int64_t uniform_int(int64_t lo, int64_t hi) {  // inclusive bounds
        return lo + static_cast<int64_t>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    bool coin() { return (next() & 1u) != 0; }

private:
    std::mt19937_64 eng_;
};

// 64-bit vertex masks; every ground set handled exhaustively fits in 64 bits.
using Mask = uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline int lowest_bit(Mask m) { return __builtin_ctzll(m); }
inline Mask full_mask(int n) { return n >= 64 ? ~0ull : ((1ull << n) - 1); }
inline bool contains(Mask m, int v) { return (m >> v) & 1ull; }

}  // namespace markovia
