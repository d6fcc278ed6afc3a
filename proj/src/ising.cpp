#include "markovia/ising.hpp"

#include <algorithm>
#include <cmath>

#include "markovia/parallel.hpp"

namespace markovia {

namespace {

constexpr int kMaxExactSites = 22;

// two-pass normalization: lands the re-summed total inside the pmf gate
void normalize(std::vector<double>& w, double total) {
    for (auto& x : w) x /= total;
    double s2 = 0.0;
    for (double x : w) s2 += x;
    for (auto& x : w) x /= s2;
}

}  // namespace

IsingModel IsingModel::from_edges(std::vector<IsingEdge> edges, const std::string& regime,
                                  double tail_mass) {
    if (regime != "finite" && regime != "summable" && regime != "sparse")
        throw ConfigError("regime must be one of finite, summable, sparse");
    IsingModel m;
    m.regime_ = regime;
    m.tail_mass_ = tail_mass;
    for (auto& e : edges) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.i == e.j) throw ConfigError("edges need distinct nonnegative sites");
        if (e.j > 1000000) throw SizeCapError("site index too large");
        if (!std::isfinite(e.theta) || e.theta == 0.0)
            throw ConfigError("couplings must be finite and nonzero");
        if (!m.lookup_.emplace(std::make_pair(e.i, e.j), e.theta).second)
            throw ConfigError("duplicate edge (" + std::to_string(e.i) + "," +
                              std::to_string(e.j) + ")");
        m.max_site_ = std::max(m.max_site_, e.j);
    }
    m.edges_ = std::move(edges);
    if (regime == "finite" && tail_mass != 0.0)
        throw RegimeError("a finite model cannot declare tail interaction mass");
    if (regime == "summable" && !(tail_mass >= 0.0 && std::isfinite(tail_mass)))
        throw RegimeError("summable models need a finite nonnegative tail mass");
    if (regime == "sparse") {
        if (tail_mass != 0.0)
            throw RegimeError("sparse models describe the tail through the default field");
        for (const auto& e : m.edges_) {
            if (e.theta > 0.0) throw RegimeError("sparse regime requires nonpositive couplings");
            if (e.i == 0 && e.theta > -2.0 * std::log(static_cast<double>(e.j)) + 1e-12)
                throw RegimeError("sparse boundary field at site " + std::to_string(e.j) +
                                  " is weaker than -2 ln k");
        }
    }
    return m;
}

IsingModel IsingModel::chain_family(const std::string& rate, int sites) {
    if (sites < 2 || sites > 100000) throw ConfigError("chain needs 2..100000 sites");
    if (rate == "geometric") {
        std::vector<IsingEdge> edges;
        for (int i = 1; i < sites; ++i)
            edges.push_back({i, i + 1, std::ldexp(1.0, -i)});
        // remaining mass sum_{i>=sites} 2^-i
        return from_edges(std::move(edges), "summable", std::ldexp(1.0, -(sites - 1)));
    }
    if (rate == "harmonic")
        throw RegimeError("harmonic chain couplings 1/i have divergent mass; "
                          "no summable declaration is possible");
    throw ConfigError("unknown chain rate: " + rate);
}

double IsingModel::theta(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || i == j) throw DomainError("coupling lookup needs distinct nonnegative sites");
    auto it = lookup_.find(std::make_pair(i, j));
    if (it != lookup_.end()) return it->second;
    if (regime_ == "sparse" && i == 0) return -2.0 * std::log(static_cast<double>(j));
    return 0.0;
}

double IsingModel::total_mass() const {
    if (regime_ == "sparse")
        throw RegimeError("sparse regime has no finite total interaction mass");
    double s = tail_mass_;
    for (const auto& e : edges_) s += std::abs(e.theta);
    return s;
}

double IsingModel::site_mass(int n) const {
    if (n < 1) throw DomainError("site index must be positive");
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::abs(theta(n, j));
    return s;
}

std::vector<int> IsingModel::coupled_below(int site, int m) const {
    std::vector<int> out;
    for (int j = 1; j <= m; ++j)
        if (j != site && theta(site, j) != 0.0) out.push_back(j);
    return out;
}

namespace {

struct TruncatedCouplings {
    std::vector<double> field;                       // field[t] = theta(0, t+1)
    std::vector<std::tuple<int, int, double>> pairs; // (bit_i, bit_j, theta), sites 1..n
};

TruncatedCouplings collect(const IsingModel& model, int n) {
    TruncatedCouplings tc;
    tc.field.resize(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) tc.field[static_cast<size_t>(k - 1)] = model.theta(0, k);
    for (const auto& e : model.edges())
        if (e.i >= 1 && e.j <= n) tc.pairs.emplace_back(e.i - 1, e.j - 1, e.theta);
    return tc;
}

double cell_energy(const TruncatedCouplings& tc, uint64_t cell) {
    double s = 0.0;
    for (size_t t = 0; t < tc.field.size(); ++t)
        if ((cell >> t) & 1ull) s += tc.field[t];
    for (const auto& [bi, bj, th] : tc.pairs)
        if (((cell >> bi) & 1ull) && ((cell >> bj) & 1ull)) s += th;
    return s;
}

}  // namespace

BinaryPmf ising_exact(const IsingModel& model, int n) {
    if (n < 1 || n > kMaxExactSites)
        throw SizeCapError("exact tables cover 1..22 sites");
    const TruncatedCouplings tc = collect(model, n);
    const uint64_t cells = 1ull << n;
    std::vector<double> w(cells);
    parallel_for(static_cast<int64_t>(cells),
                 [&](int64_t cell) { w[static_cast<size_t>(cell)] = std::exp(cell_energy(tc, static_cast<uint64_t>(cell))); });
    const double z = chunked_sum(static_cast<int64_t>(cells),
                                 [&](int64_t i) { return w[static_cast<size_t>(i)]; });
    if (!(z > 0.0) || !std::isfinite(z)) throw NumericError("partition sum overflowed", 0.0);
    normalize(w, z);
    return BinaryPmf(n, std::move(w));
}

double ising_conditional(const IsingModel& model, int site, const std::map<int, int>& given) {
    if (site < 1) throw DomainError("site index must be positive");
    std::vector<int> coupled;
    for (const auto& e : model.edges()) {
        if (e.i == site && e.j >= 1) coupled.push_back(e.j);
        else if (e.j == site && e.i >= 1) coupled.push_back(e.i);
    }
    std::sort(coupled.begin(), coupled.end());
    double s = model.theta(site, 0);
    for (int j : coupled) {
        auto it = given.find(j);
        if (it == given.end())
            throw DomainError("coupled site " + std::to_string(j) + " needs a value");
        if (it->second != 0 && it->second != 1) throw DomainError("site values must be 0 or 1");
        s += model.theta(site, j) * it->second;
    }
    for (const auto& [k, v] : given)
        if (!std::binary_search(coupled.begin(), coupled.end(), k))
            throw DomainError("site " + std::to_string(k) + " is not coupled to " +
                              std::to_string(site));
    return 1.0 / (1.0 + std::exp(-s));
}

double ising_prefix_ratio(const IsingModel& model, const std::vector<int>& prefix, int n) {
    const int m = static_cast<int>(prefix.size());
    if (m < 1) throw DomainError("prefix must be nonempty");
    if (n < m || n > kMaxExactSites) throw SizeCapError("need prefix size <= n <= 22");
    for (int v : prefix)
        if (v != 0 && v != 1) throw DomainError("prefix values must be 0 or 1");

    const int tail_sites = n - m;
    // per tail site j = m+1+t: boundary field and prefix cross-coupling
    std::vector<double> w0(static_cast<size_t>(tail_sites));
    std::vector<double> wv(static_cast<size_t>(tail_sites));
    for (int t = 0; t < tail_sites; ++t) {
        const int j = m + 1 + t;
        w0[static_cast<size_t>(t)] = model.theta(0, j);
        double cross = 0.0;
        for (int i = 1; i <= m; ++i)
            cross += model.theta(i, j) * prefix[static_cast<size_t>(i - 1)];
        wv[static_cast<size_t>(t)] = cross;
    }
    std::vector<std::tuple<int, int, double>> tail_pairs;
    for (const auto& e : model.edges())
        if (e.i > m && e.j <= n) tail_pairs.emplace_back(e.i - m - 1, e.j - m - 1, e.theta);

    const uint64_t cells = 1ull << tail_sites;
    auto tail_energy = [&](uint64_t cell) {
        double s = 0.0;
        for (int t = 0; t < tail_sites; ++t)
            if ((cell >> t) & 1ull) s += w0[static_cast<size_t>(t)];
        for (const auto& [bi, bj, th] : tail_pairs)
            if (((cell >> bi) & 1ull) && ((cell >> bj) & 1ull)) s += th;
        return s;
    };
    const double den = chunked_sum(static_cast<int64_t>(cells), [&](int64_t cell) {
        return std::exp(tail_energy(static_cast<uint64_t>(cell)));
    });
    const double num = chunked_sum(static_cast<int64_t>(cells), [&](int64_t cell) {
        double s = tail_energy(static_cast<uint64_t>(cell));
        for (int t = 0; t < tail_sites; ++t)
            if ((static_cast<uint64_t>(cell) >> t) & 1ull) s += wv[static_cast<size_t>(t)];
        return std::exp(s);
    });

    // prefix-internal weight, boundary site included with v_0 = 1
    double w = 0.0;
    for (int i = 1; i <= m; ++i) {
        w += model.theta(0, i) * prefix[static_cast<size_t>(i - 1)];
        for (int j = i + 1; j <= m; ++j)
            w += model.theta(i, j) * prefix[static_cast<size_t>(i - 1)] *
                 prefix[static_cast<size_t>(j - 1)];
    }
    return std::exp(w) * num / den;
}

std::vector<double> ising_prefix_marginals(const IsingModel& model, int m, int n) {
    if (m < 1 || m > n) throw DomainError("need 1 <= m <= n");
    if (m > 20) throw SizeCapError("prefix too long");
    BinaryPmf pmf = ising_exact(model, n);
    std::vector<double> marg(1ull << m, 0.0);
    const uint64_t prefix_mask = (1ull << m) - 1;
    for (uint64_t cell = 0; cell < pmf.cells(); ++cell)
        marg[cell & prefix_mask] += pmf[cell];
    return marg;
}

DiagnosticReport ising_convergence(const IsingModel& model, int m, int n_max, double tol) {
    if (model.regime() == "sparse")
        throw RegimeError("convergence diagnostics need a finite or summable model");
    if (m < 1 || m > 6) throw ConfigError("prefix length must be in 1..6");
    if (n_max < m + 1 || n_max > kMaxExactSites)
        throw ConfigError("n_max must be in m+1..22");

    DiagnosticReport rep;
    rep.command = "ising-converge";
    rep.tolerance = tol;

    const double total = model.total_mass();
    const double big_c = std::exp(2.0 * total);
    const uint64_t nv = 1ull << m;

    Trace tr;
    tr.name = "convergence";
    tr.columns = {"n", "v", "f", "alpha", "beta", "qualifies", "bound_ok"};

    bool route_ok = true, bound_ok = true, sandwich_ok = true;
    double worst_route = 0.0;
    json route_w = json::array(), bound_w = json::array(), sandwich_w = json::array();

    std::vector<double> prev_f;
    std::vector<double> last_f;
    for (int n = m; n <= n_max; ++n) {
        std::vector<double> marg = ising_prefix_marginals(model, m, n);
        std::vector<double> f(nv);
        for (uint64_t vb = 0; vb < nv; ++vb) {
            std::vector<int> v(static_cast<size_t>(m));
            for (int k = 0; k < m; ++k) v[static_cast<size_t>(k)] = static_cast<int>((vb >> k) & 1ull);
            f[vb] = ising_prefix_ratio(model, v, n);
            const double ratio = marg[vb] / marg[0];
            const double diff = std::abs(f[vb] - ratio);
            worst_route = std::max(worst_route, diff);
            if (diff > tol) {
                route_ok = false;
                if (route_w.size() < 50) {
                    json w;
                    w["n"] = n;
                    w["v"] = static_cast<int64_t>(vb);
                    w["f"] = f[vb];
                    w["marginal_ratio"] = ratio;
                    route_w.push_back(w);
                }
            }
            if (marg[vb] < 1.0 / (big_c * std::ldexp(1.0, m)) - 1e-15 ||
                marg[vb] > big_c / std::ldexp(1.0, m) + 1e-15) {
                sandwich_ok = false;
                json w;
                w["n"] = n;
                w["v"] = static_cast<int64_t>(vb);
                w["p"] = marg[vb];
                sandwich_w.push_back(w);
            }
        }
        // step ratio between truncations nn and nn+1, with the site mass of nn
        const int nn = n - 1;
        const bool have_alpha = n > m;
        const double beta = have_alpha ? model.site_mass(nn) : 0.0;
        const bool qualifies =
            have_alpha && nn >= m && model.coupled_below(nn + 1, m).empty();
        for (uint64_t vb = 0; vb < nv; ++vb) {
            std::string alpha_s = "nan";
            std::string ok_s = "-";
            if (have_alpha) {
                const double alpha = f[vb] / prev_f[vb];
                alpha_s = format_double(alpha);
                if (qualifies) {
                    const bool ok = std::abs(alpha - 1.0) <= 2.0 * beta + 1e-15;
                    ok_s = ok ? "1" : "0";
                    if (!ok) {
                        bound_ok = false;
                        json w;
                        w["n"] = nn;
                        w["v"] = static_cast<int64_t>(vb);
                        w["alpha"] = alpha;
                        w["beta"] = beta;
                        bound_w.push_back(w);
                    }
                }
            }
            tr.add_row({std::to_string(n), std::to_string(vb), format_double(f[vb]), alpha_s,
                        have_alpha ? format_double(beta) : std::string("nan"),
                        qualifies ? "1" : "0", ok_s});
        }
        prev_f = f;
        last_f = std::move(f);
    }

    {
        Check& c = rep.add_check("prefix-ratio-dual-route", "truncation-convergence",
                                 route_ok ? Verdict::pass : Verdict::fail);
        c.details["worst_diff"] = worst_route;
        c.witnesses = route_w;
    }
    {
        Check& c = rep.add_check("ratio-step-mass-bound", "truncation-convergence",
                                 bound_ok ? Verdict::pass : Verdict::fail);
        c.details["note"] = "checks |alpha_n - 1| <= 2 beta_n at qualifying n; the added site's "
                            "own mass is recorded per row in the trace";
        c.witnesses = bound_w;
    }
    {
        Check& c = rep.add_check("marginal-sandwich", "truncation-convergence",
                                 sandwich_ok ? Verdict::pass : Verdict::fail);
        c.details["C"] = big_c;
        c.witnesses = sandwich_w;
    }
    {
        double delivered = 0.0;
        for (int k = 1; k <= n_max; ++k) delivered += model.site_mass(k);
        const double r = total - delivered;
        Verdict v = Verdict::pass;
        json intervals = json::array();
        for (uint64_t vb = 0; vb < nv; ++vb) {
            json iv;
            iv["v"] = static_cast<int64_t>(vb);
            iv["f"] = last_f[vb];
            iv["lo"] = last_f[vb] * std::max(0.0, 1.0 - 2.0 * std::max(0.0, r));
            iv["hi"] = last_f[vb] * std::exp(2.0 * std::max(0.0, r));
            intervals.push_back(iv);
        }
        if (r < -1e-12) v = Verdict::fail;
        Check& c = rep.add_check("limit-envelope", "truncation-convergence", v);
        c.details["undelivered_mass"] = r;
        c.details["intervals"] = intervals;
        if (v == Verdict::fail)
            c.details["note"] = "declared total mass is smaller than the listed couplings";
    }
    rep.add_trace(std::move(tr));
    return rep;
}

DiagnosticReport ising_exact_report(const IsingModel& model, int n) {
    DiagnosticReport rep;
    rep.command = "ising-exact";
    rep.tolerance = 1e-12;
    BinaryPmf pmf = ising_exact(model, n);

    Trace tr;
    tr.name = "site-marginals";
    tr.columns = {"site", "p_one"};
    for (int k = 1; k <= n; ++k) {
        const double p = pmf.marginal(1ull << (k - 1), 1);
        tr.add_row({std::to_string(k), format_double(p)});
    }

    // conditional locality: the lattice conditional given coupled sites only
    // must reproduce the exact-table conditional given all remaining sites
    bool local_ok = true;
    double worst = 0.0;
    json wit = json::array();
    const uint64_t probes[] = {0ull, ~0ull, 0x5555555555555555ull, 0x3333333333333333ull};
    for (int site = 1; site <= n; ++site) {
        std::map<int, int> given;
        bool coupled_ok = true;
        for (const auto& e : model.edges()) {
            int other = -1;
            if (e.i == site && e.j >= 1) other = e.j;
            if (e.j == site && e.i >= 1) other = e.i;
            if (other > n) coupled_ok = false;
        }
        if (!coupled_ok) continue;  // coupled partner outside the truncation
        for (uint64_t probe : probes) {
            const uint64_t cell = probe & (pmf.cells() - 1);
            given.clear();
            for (const auto& e : model.edges()) {
                int other = -1;
                if (e.i == site && e.j >= 1) other = e.j;
                if (e.j == site && e.i >= 1) other = e.i;
                if (other >= 1) given[other] = static_cast<int>((cell >> (other - 1)) & 1ull);
            }
            const double lattice = ising_conditional(model, site, given);
            const Mask rest = full_mask(n) & ~(1ull << (site - 1));
            const double p_rest = pmf.marginal(rest, gather_bits(cell, rest));
            const double p_one = pmf[(cell & rest) | (1ull << (site - 1))];
            const double exact = p_one / p_rest;
            const double diff = std::abs(lattice - exact);
            worst = std::max(worst, diff);
            if (diff > 1e-12) {
                local_ok = false;
                json w;
                w["site"] = site;
                w["cell"] = static_cast<int64_t>(cell);
                w["lattice"] = lattice;
                w["exact"] = exact;
                wit.push_back(w);
            }
        }
    }
    {
        Check& c = rep.add_check("conditional-locality", "exact-table",
                                 local_ok ? Verdict::pass : Verdict::fail);
        c.details["worst_diff"] = worst;
        c.witnesses = wit;
    }
    {
        // first-site marginal through the prefix ratio: P(X_1 = 1) = f/(1+f)
        const double f = ising_prefix_ratio(model, {1}, n);
        const double direct = pmf.marginal(1ull, 1);
        const double diff = std::abs(f / (1.0 + f) - direct);
        Check& c = rep.add_check("first-site-dual-route", "exact-table",
                                 diff <= 1e-12 ? Verdict::pass : Verdict::fail);
        c.details["via_ratio"] = f / (1.0 + f);
        c.details["via_table"] = direct;
    }
    rep.add_trace(std::move(tr));
    return rep;
}

namespace {

// Adds exp(energy of stack ∪ chosen) over all subsets `chosen` of
// {first..k_window} \ {skip} with at most `budget` elements.
void sum_supports(const IsingModel& model, int k_window, int budget, int first, int skip,
                  std::vector<int>& stack, double energy, double& acc) {
    acc += std::exp(energy);
    if (budget == 0) return;
    for (int k = first; k <= k_window; ++k) {
        if (k == skip) continue;
        double e = energy + model.theta(0, k);
        for (int s : stack) e += model.theta(s, k);
        stack.push_back(k);
        sum_supports(model, k_window, budget - 1, k + 1, skip, stack, e, acc);
        stack.pop_back();
    }
}

}  // namespace

SparseNormalizer sparse_normalizer(const IsingModel& model, int k_window, int max_support) {
    if (model.regime() != "sparse")
        throw RegimeError("partial normalizers apply to the sparse regime");
    if (k_window < 1 || k_window > 64) throw ConfigError("window must be in 1..64");
    if (max_support < 0 || max_support > 8) throw ConfigError("support cap must be in 0..8");

    SparseNormalizer out;
    out.k_window = k_window;
    out.max_support = max_support;
    std::vector<int> stack;
    double acc = 0.0;
    sum_supports(model, k_window, max_support, 1, 0, stack, 0.0, acc);
    out.partial = acc;

    // per-site activation mass is dominated by k^-2, so C = pi^2/6
    const double c = M_PI * M_PI / 6.0;
    double head = 0.0, term = 1.0;
    for (int n = 0; n <= max_support; ++n) {
        head += term;
        term *= c / static_cast<double>(n + 1);
    }
    out.tail_bound = (std::exp(c) - head) + std::exp(c) / static_cast<double>(k_window);
    return out;
}

double sparse_conditional_floor(const IsingModel& model, int site, int k_window,
                                int max_support) {
    if (site < 1 || site > k_window) throw DomainError("site must lie inside the window");
    if (max_support < 1) throw ConfigError("support cap must allow the site itself");
    SparseNormalizer z = sparse_normalizer(model, k_window, max_support);
    // numerator: supports that contain `site`
    std::vector<int> stack{site};
    double num = 0.0;
    sum_supports(model, k_window, max_support - 1, 1, site, stack, model.theta(0, site), num);
    return num / (z.partial + z.tail_bound);
}

}  // namespace markovia
