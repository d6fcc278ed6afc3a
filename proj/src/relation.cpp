#include "markovia/relation.hpp"

#include <algorithm>
#include <cmath>

namespace markovia {

namespace {
constexpr int kMaxWitnesses = 200;
}

json mask_to_json(Mask m) {
    json arr = json::array();
    while (m) {
        arr.push_back(lowest_bit(m));
        m &= m - 1;
    }
    return arr;
}

CIStatement::CIStatement(Mask a_, Mask b_, Mask c_) : a(a_), b(b_), c(c_) {
    if (!a || !b) throw DomainError("statement blocks A and B must be nonempty");
    if ((a & b) || (a & c) || (b & c)) throw DomainError("statement blocks must be pairwise disjoint");
    if (a > b) std::swap(a, b);
}

CIRelation::CIRelation(int n, std::string provenance, double tol, DistanceFn fn)
    : n_(n),
      provenance_(std::move(provenance)),
      tol_(tol),
      fn_(std::move(fn)),
      memo_(std::make_shared<std::map<std::array<Mask, 3>, double>>()) {
    if (n < 1 || n > 63) throw SizeCapError("relation ground set must have 1..63 vertices");
}

double CIRelation::distance(Mask a, Mask b, Mask c) const {
    CIStatement s(a, b, c);
    if ((s.a | s.b | s.c) & ~ground()) throw DomainError("statement vertex outside ground set");
    const std::array<Mask, 3> key{s.a, s.b, s.c};
    auto it = memo_->find(key);
    if (it != memo_->end()) return it->second;
    const double d = fn_(s.a, s.b, s.c);
    memo_->emplace(key, d);
    return d;
}

CIRelation CIRelation::from_statements(int n, const std::vector<CIStatement>& members) {
    auto set = std::make_shared<std::vector<CIStatement>>(members);
    std::sort(set->begin(), set->end());
    return CIRelation(n, "explicit", 0.5, [set](Mask a, Mask b, Mask c) {
        return std::binary_search(set->begin(), set->end(), CIStatement(a, b, c)) ? 0.0 : 1.0;
    });
}

CIRelation CIRelation::with_override(const CIStatement& s, bool value) const {
    CIRelation base = *this;
    CIRelation out(n_, provenance_ + "+override", tol_,
                   [base, s, value](Mask a, Mask b, Mask c) {
                       CIStatement q(a, b, c);
                       if (q.a == s.a && q.b == s.b && q.c == s.c)
                           return value ? 0.0 : base.tol() + 1.0;
                       return base.distance(a, b, c);
                   });
    return out;
}

CIRelation relation_from_discrete(const BinaryPmf& pmf, double tol) {
    auto table = std::make_shared<BinaryPmf>(pmf);
    return CIRelation(pmf.size(), "discrete-distribution", tol,
                      [table](Mask a, Mask b, Mask c) { return table->ci_distance(a, b, c); });
}

namespace {

// Decodes a mixed-radix assignment of vertices to blocks into block masks.
void decode_blocks(uint64_t code, int n, int nblocks, Mask* blocks) {
    for (int b = 0; b < nblocks; ++b) blocks[b] = 0;
    for (int v = 0; v < n; ++v) {
        int d = static_cast<int>(code % static_cast<uint64_t>(nblocks + 1));
        code /= static_cast<uint64_t>(nblocks + 1);
        if (d < nblocks) blocks[d] |= 1ull << v;  // digit nblocks = unused vertex
    }
}

uint64_t pow_u64(uint64_t base, int exp) {
    uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

struct AxiomInstance {
    bool applicable = false;
    bool violated = false;
    json witness;
};

json witness_blocks(Mask x, Mask y, Mask z, Mask w, bool has_w) {
    json j;
    j["x"] = mask_to_json(x);
    j["y"] = mask_to_json(y);
    j["z"] = mask_to_json(z);
    if (has_w) j["w"] = mask_to_json(w);
    return j;
}

// Partitions of the vertices in `x` via restricted growth strings; calls
// visit(blocks) for every partition with at least two blocks.
template <class Visit>
void for_each_partition(Mask x, Visit&& visit) {
    std::vector<int> verts;
    for (Mask m = x; m; m &= m - 1) verts.push_back(lowest_bit(m));
    const int k = static_cast<int>(verts.size());
    std::vector<int> rgs(static_cast<size_t>(k), 0);
    std::vector<Mask> blocks;
    auto emit = [&]() {
        int nb = *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (nb < 2) return;
        blocks.assign(static_cast<size_t>(nb), 0);
        for (int i = 0; i < k; ++i) blocks[static_cast<size_t>(rgs[static_cast<size_t>(i)])] |= 1ull << verts[static_cast<size_t>(i)];
        visit(blocks);
    };
    // iterate restricted growth strings in lexicographic order
    while (true) {
        emit();
        int i = k - 1;
        for (; i > 0; --i) {
            int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
            if (rgs[static_cast<size_t>(i)] <= prefix_max) {
                ++rgs[static_cast<size_t>(i)];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
            rgs[static_cast<size_t>(i)] = 0;
        }
        if (i == 0) break;
    }
}

AxiomInstance eval_axiom_instance(const CIRelation& r, const std::string& axiom, uint64_t code,
                                  bool general_partitions) {
    AxiomInstance out;
    const int n = r.size();
    Mask blk[4];
    if (axiom == "P1*") {
        decode_blocks(code, n, 3, blk);
        const Mask x = blk[0], y = blk[1], z = blk[2];
        if (!x || !y) return out;
        out.applicable = true;
        const bool fwd = r.holds(x, y, z), bwd = r.holds(y, x, z);
        if (fwd != bwd) {
            out.violated = true;
            out.witness = witness_blocks(x, y, z, 0, false);
            out.witness["forward"] = fwd;
            out.witness["backward"] = bwd;
        }
        return out;
    }
    if (axiom == "P2*" || axiom == "P3*" || axiom == "P4*" || axiom == "P5") {
        decode_blocks(code, n, 4, blk);
        const Mask x = blk[0], y = blk[1], w = blk[2], z = blk[3];
        if (!x || !y || !w) return out;
        out.applicable = true;
        bool premise = false, conclusion = true;
        if (axiom == "P2*") {  // X _||_ (Y u W) | Z  =>  X _||_ Y | Z
            premise = r.holds(x, y | w, z);
            if (premise) conclusion = r.holds(x, y, z);
        } else if (axiom == "P3*") {  // X _||_ (Y u W) | Z  =>  X _||_ Y | Z u W
            premise = r.holds(x, y | w, z);
            if (premise) conclusion = r.holds(x, y, z | w);
        } else if (axiom == "P4*") {  // X _||_ Y | Z u W  and  X _||_ W | Z  =>  X _||_ (Y u W) | Z
            premise = r.holds(x, y, z | w) && r.holds(x, w, z);
            if (premise) conclusion = r.holds(x, y | w, z);
        } else {  // P5: X _||_ Y | Z u W  and  X _||_ W | Z u Y  =>  X _||_ (Y u W) | Z
            premise = r.holds(x, y, z | w) && r.holds(x, w, z | y);
            if (premise) conclusion = r.holds(x, y | w, z);
        }
        if (premise && !conclusion) {
            out.violated = true;
            out.witness = witness_blocks(x, y, z, w, true);
            out.witness["axiom"] = axiom;
        }
        return out;
    }
    if (axiom == "P5*") {
        // singleton-partition intersection: on finite ground sets this form
        // together with P5 implies the general-partition property
        decode_blocks(code, n, 3, blk);
        const Mask x = blk[0], y = blk[1], z = blk[2];
        if (!x || !y || popcount(x) < 2) return out;
        out.applicable = true;
        bool premise = true;
        for (Mask m = x; m && premise; m &= m - 1) {
            const Mask e = 1ull << lowest_bit(m);
            premise = r.holds(e, y, z | (x & ~e));
        }
        if (premise && !r.holds(x, y, z)) {
            out.violated = true;
            out.witness = witness_blocks(x, y, z, 0, false);
            out.witness["partition"] = "singletons";
        }
        if (general_partitions && !out.violated) {
            for_each_partition(x, [&](const std::vector<Mask>& blocks) {
                if (out.violated) return;
                bool all = true;
                for (Mask bm : blocks)
                    if (!r.holds(bm, y, z | (x & ~bm))) {
                        all = false;
                        break;
                    }
                if (all && !r.holds(x, y, z)) {
                    out.violated = true;
                    out.witness = witness_blocks(x, y, z, 0, false);
                    json parts = json::array();
                    for (Mask bm : blocks) parts.push_back(mask_to_json(bm));
                    out.witness["partition"] = parts;
                }
            });
        }
        return out;
    }
    throw ConfigError("unknown axiom id: " + axiom);
}

int axiom_block_count(const std::string& axiom) {
    if (axiom == "P1*" || axiom == "P5*") return 3;
    return 4;
}

}  // namespace

std::vector<std::string> axiom_names() {
    return {"P1*", "P2*", "P3*", "P4*", "P5", "P5*"};
}

AxiomReport check_axiom(const CIRelation& r, const std::string& axiom, int cap,
                        bool general_partitions, int64_t samples, uint64_t seed) {
    AxiomReport rep;
    rep.axiom = axiom;
    const int n = r.size();
    const int nblocks = axiom_block_count(axiom);
    int witnesses = 0;
    auto consume = [&](const AxiomInstance& inst) {
        if (!inst.applicable) return;
        ++rep.instantiations;
        if (inst.violated) {
            rep.verdict = Verdict::fail;
            if (witnesses < kMaxWitnesses) {
                rep.witnesses.push_back(inst.witness);
                ++witnesses;
            }
        }
    };
    if (samples > 0) {
        Rng rng(seed);
        for (int64_t t = 0; t < samples; ++t) {
            uint64_t code = 0, mult = 1;
            for (int v = 0; v < n; ++v) {
                code += mult * static_cast<uint64_t>(rng.uniform_int(0, nblocks));
                mult *= static_cast<uint64_t>(nblocks + 1);
            }
            consume(eval_axiom_instance(r, axiom, code, general_partitions));
        }
        return rep;
    }
    if (n > cap)
        throw SizeCapError("ground set exceeds exhaustive cap " + std::to_string(cap) +
                           "; pass a sample count instead");
    const uint64_t total = pow_u64(static_cast<uint64_t>(nblocks + 1), n);
    for (uint64_t code = 0; code < total; ++code)
        consume(eval_axiom_instance(r, axiom, code, general_partitions));
    return rep;
}

namespace {

struct PropertyResult {
    bool holds = true;
    json witnesses = json::array();
    int64_t statements = 0;
};

PropertyResult markov_pairwise(const CIRelation& r, const Graph& g) {
    PropertyResult out;
    const int n = r.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (g.has_edge(i, j)) continue;
            ++out.statements;
            const Mask a = 1ull << i, b = 1ull << j;
            const Mask c = r.ground() & ~(a | b);
            if (!r.holds(a, b, c)) {
                out.holds = false;
                json w = witness_blocks(a, b, c, 0, false);
                w["distance"] = r.distance(a, b, c);
                out.witnesses.push_back(w);
            }
        }
    return out;
}

PropertyResult markov_local(const CIRelation& r, const Graph& g) {
    PropertyResult out;
    for (int v = 0; v < r.size(); ++v) {
        const Mask rest = r.ground() & ~g.closure(v);
        if (!rest) continue;
        ++out.statements;
        if (!r.holds(1ull << v, rest, g.neighbors(v))) {
            out.holds = false;
            json w = witness_blocks(1ull << v, rest, g.neighbors(v), 0, false);
            w["distance"] = r.distance(1ull << v, rest, g.neighbors(v));
            out.witnesses.push_back(w);
        }
    }
    return out;
}

PropertyResult markov_global(const CIRelation& r, const Graph& g, int cap) {
    PropertyResult out;
    const int n = r.size();
    if (n > cap) throw SizeCapError("global-property enumeration capped at " + std::to_string(cap));
    const uint64_t total = pow_u64(4, n);
    for (uint64_t code = 0; code < total; ++code) {
        Mask blk[3];
        decode_blocks(code, n, 3, blk);
        const Mask a = blk[0], b = blk[1], s = blk[2];
        if (!a || !b) continue;
        if (!g.is_separator(s, a, b)) continue;
        ++out.statements;
        if (!r.holds(a, b, s)) {
            out.holds = false;
            if (out.witnesses.size() < static_cast<size_t>(kMaxWitnesses)) {
                json w;
                w["a"] = mask_to_json(a);
                w["b"] = mask_to_json(b);
                w["s"] = mask_to_json(s);
                w["distance"] = r.distance(a, b, s);
                out.witnesses.push_back(w);
            }
        }
    }
    return out;
}

PropertyResult run_property(const CIRelation& r, const Graph& g, const std::string& which, int cap) {
    if (which == "P*" || which == "pairwise") return markov_pairwise(r, g);
    if (which == "L*" || which == "local") return markov_local(r, g);
    if (which == "G*" || which == "global") return markov_global(r, g, cap);
    throw ConfigError("unknown set-Markov property: " + which);
}

std::string property_id(const std::string& which) {
    if (which == "P*" || which == "pairwise") return "markov-pairwise";
    if (which == "L*" || which == "local") return "markov-local";
    return "markov-global";
}

}  // namespace

DiagnosticReport check_markov(const CIRelation& r, const Graph& g, const std::string& which,
                              int global_cap) {
    if (g.size() != r.size()) throw DomainError("graph and relation vertex sets must match");
    DiagnosticReport rep;
    rep.command = "check-markov";
    rep.tolerance = r.tol();
    PropertyResult res = run_property(r, g, which, global_cap);
    Check& c = rep.add_check(property_id(which), "set-markov-property",
                             res.holds ? Verdict::pass : Verdict::fail);
    c.details["statements_checked"] = res.statements;
    c.details["relation"] = r.provenance();
    c.witnesses = res.witnesses;
    return rep;
}

DiagnosticReport equivalence_audit(const CIRelation& r, const Graph& g, int axiom_cap,
                                   int global_cap) {
    if (g.size() != r.size()) throw DomainError("graph and relation vertex sets must match");
    DiagnosticReport rep;
    rep.command = "audit-equivalence";
    rep.tolerance = r.tol();

    json axiom_verdicts = json::object();
    bool axioms_pass = true;
    for (const std::string& ax : axiom_names()) {
        AxiomReport ar = check_axiom(r, ax, axiom_cap);
        axiom_verdicts[ax] = to_string(ar.verdict);
        if (ar.verdict != Verdict::pass) axioms_pass = false;
    }
    PropertyResult pw = markov_pairwise(r, g);
    PropertyResult lc = markov_local(r, g);
    PropertyResult gl = markov_global(r, g, global_cap);

    json props;
    props["pairwise"] = pw.holds;
    props["local"] = lc.holds;
    props["global"] = gl.holds;

    {
        Check& c = rep.add_check("global-implies-local", "set-markov-implications",
                                 (gl.holds && !lc.holds) ? Verdict::fail : Verdict::pass);
        c.details["axioms"] = axiom_verdicts;
        c.details["properties"] = props;
        if (gl.holds && !lc.holds) c.witnesses = lc.witnesses;
    }
    {
        Check& c = rep.add_check("local-implies-pairwise", "set-markov-implications",
                                 (lc.holds && !pw.holds) ? Verdict::fail : Verdict::pass);
        if (lc.holds && !pw.holds) c.witnesses = pw.witnesses;
    }
    {
        Verdict v = Verdict::pass;
        std::string note = "asserted";
        if (!axioms_pass) {
            v = Verdict::inconclusive;
            note = "not asserted: axiom failures listed in details";
        } else if (pw.holds && !gl.holds) {
            v = Verdict::fail;
        }
        Check& c = rep.add_check("pairwise-implies-global-under-axioms",
                                 "set-markov-implications", v);
        c.details["note"] = note;
        c.details["axioms"] = axiom_verdicts;
        if (v == Verdict::fail) c.witnesses = gl.witnesses;
    }
    return rep;
}

Graph pairwise_graph(const CIRelation& r) {
    const int n = r.size();
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Mask a = 1ull << i, b = 1ull << j;
            if (!r.holds(a, b, r.ground() & ~(a | b))) g.add_edge(i, j);
        }
    return g;
}

}  // namespace markovia
