#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "markovia/common.hpp"
#include "markovia/graph.hpp"
#include "markovia/pmf.hpp"
#include "markovia/report.hpp"

namespace markovia {

// A conditional-independence statement A _||_ B | C over disjoint vertex
// masks; A and B nonempty.  Canonical form orders the first two blocks so a
// statement and its symmetric twin always resolve to the same query.
struct CIStatement {
    Mask a = 0, b = 0, c = 0;

    CIStatement() = default;
    CIStatement(Mask a_, Mask b_, Mask c_);  // validates and canonicalizes

    bool operator<(const CIStatement& o) const {
        return std::array<Mask, 3>{a, b, c} < std::array<Mask, 3>{o.a, o.b, o.c};
    }
};

// Ternary relation with a memoized membership oracle.  The oracle reports a
// numeric deviation; the statement holds when deviation <= tol.  Explicit
// relations use deviation 0/1.
class CIRelation {
public:
    using DistanceFn = std::function<double(Mask, Mask, Mask)>;

    CIRelation(int n, std::string provenance, double tol, DistanceFn fn);

    static CIRelation from_statements(int n, const std::vector<CIStatement>& members);

    int size() const { return n_; }
    Mask ground() const { return full_mask(n_); }
    const std::string& provenance() const { return provenance_; }
    double tol() const { return tol_; }

    double distance(Mask a, Mask b, Mask c) const;
    bool holds(Mask a, Mask b, Mask c) const { return distance(a, b, c) <= tol_; }

    // Overlays a forced answer on one canonical statement (used to inject
    // axiom violations in tests and audits).
    CIRelation with_override(const CIStatement& s, bool value) const;

private:
    int n_;
    std::string provenance_;
    double tol_;
    DistanceFn fn_;
    mutable std::shared_ptr<std::map<std::array<Mask, 3>, double>> memo_;
};

CIRelation relation_from_discrete(const BinaryPmf& pmf, double tol = 1e-9);

struct AxiomReport {
    std::string axiom;
    Verdict verdict = Verdict::pass;
    json witnesses = json::array();
    int64_t instantiations = 0;
};

// Exhaustively instantiates one of P1*, P2*, P3*, P4*, P5, P5* over the
// ground set.  Beyond `cap` vertices exhaustive mode refuses; pass samples>0
// to spot-check randomly instead.  For P5* the finite ground set makes the
// P5 form plus singleton partitions sufficient; set general_partitions to
// cross-validate against full partition enumeration (Bell-number cost).
AxiomReport check_axiom(const CIRelation& r, const std::string& axiom, int cap = 7,
                        bool general_partitions = false, int64_t samples = 0,
                        uint64_t seed = 0);

std::vector<std::string> axiom_names();  // P1*..P5 and P5*

// Set-Markov properties relative to a graph:
//   pairwise: non-adjacent i, j  =>  {i} _||_ {j} | V minus {i,j}
//   local:    every v            =>  {v} _||_ V minus cl(v) | ne(v)
//   global:   S separates A, B   =>  A _||_ B | S
DiagnosticReport check_markov(const CIRelation& r, const Graph& g, const std::string& which,
                              int global_cap = 12);

// Evaluates the implication chain global => local => pairwise, and, when all
// of P1*..P5* pass, pairwise => global.  A failed implication is a defect
// witness (the finite theory guarantees the chain).
DiagnosticReport equivalence_audit(const CIRelation& r, const Graph& g, int axiom_cap = 7,
                                   int global_cap = 12);

// Graph with an edge exactly where the pairwise statement FAILS, so the
// pairwise property holds on the result by construction.
Graph pairwise_graph(const CIRelation& r);

json mask_to_json(Mask m);

}  // namespace markovia
