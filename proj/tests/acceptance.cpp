// Acceptance gate: nine end-to-end scenarios, each printed as a single
// [PASS]/[FAIL] line with its wall-clock time.  Every scenario carries a time
// budget; blowing the budget fails the criterion even if the math held.
// Exit status is 0 only when all nine lines pass.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "markovia/chain.hpp"
#include "markovia/common.hpp"
#include "markovia/counterexamples.hpp"
#include "markovia/gaussian.hpp"
#include "markovia/graph.hpp"
#include "markovia/ising.hpp"
#include "markovia/pmf.hpp"
#include "markovia/relation.hpp"
#include "markovia/report.hpp"

namespace {

using namespace markovia;

struct Outcome {
    bool ok = true;
    std::string detail;
};

const Check* find_check(const DiagnosticReport& rep, const std::string& id) {
    for (const auto& c : rep.checks)
        if (c.id == id) return &c;
    return nullptr;
}

bool check_passes(const DiagnosticReport& rep, const std::string& id) {
    const Check* c = find_check(rep, id);
    return c != nullptr && c->verdict == Verdict::pass;
}

std::string fmt(const char* pattern, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, x);
    return buf;
}

// Strictly positive pmf with planted pairwise interactions: a random edge set
// over sites 1..n (no boundary terms), couplings of random sign with
// |theta| in [0.2, 1.2] so every dependence sits far above the CI tolerance.
BinaryPmf structured_pmf(int n, Rng& rng) {
    std::vector<IsingEdge> edges;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            if (rng.uniform() >= 0.45) continue;
            const double mag = rng.uniform(0.2, 1.2);
            edges.push_back({i, j, rng.coin() ? mag : -mag});
        }
    }
    return ising_exact(IsingModel::from_edges(std::move(edges), "finite"), n);
}

// 1. The three set-Markov implications plus the asserted converse hold on 500
//    strictly positive pmfs (half generic, half interaction-structured).
Outcome criterion_equivalence_audit() {
    Rng rng(20260814);
    int asserted = 0;
    int bad = 0;
    std::string first;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 4 + (trial & 1);
        const BinaryPmf pmf =
            trial < 250 ? BinaryPmf::random_positive(n, rng) : structured_pmf(n, rng);
        const CIRelation rel = relation_from_discrete(pmf, 1e-9);
        const Graph g = pairwise_graph(rel);
        const DiagnosticReport rep = equivalence_audit(rel, g, 5, 5);
        const Check* conv = find_check(rep, "pairwise-implies-global-under-axioms");
        const bool converse_asserted = conv != nullptr && conv->verdict == Verdict::pass &&
                                       conv->details.value("note", "") == "asserted";
        if (rep.verdict() == Verdict::pass && converse_asserted) {
            ++asserted;
        } else {
            ++bad;
            if (first.empty())
                first = "trial " + std::to_string(trial) + " verdict " +
                        to_string(rep.verdict());
        }
    }
    Outcome o;
    o.ok = bad == 0;
    o.detail = o.ok ? "500 pmfs over 4-5 variables: implications held, converse asserted on all"
                    : std::to_string(bad) + " of 500 audits failed (" + first + ")";
    return o;
}

// 2. Separator decisions agree between the BFS route and the exhaustive
//    simple-path reference on random graphs with at most 8 vertices.
Outcome criterion_separation_routes() {
    Rng rng(715225741);
    int queries = 0;
    int mismatches = 0;
    for (int gi = 0; gi < 200; ++gi) {
        const int n = static_cast<int>(rng.uniform_int(3, 8));
        const Graph g = Graph::random(n, rng.uniform(0.15, 0.85), rng);
        int done = 0;
        while (done < 30) {
            Mask s = 0, a = 0, b = 0;
            for (int v = 0; v < n; ++v) {
                switch (rng.uniform_int(0, 3)) {
                    case 0: s |= Mask(1) << v; break;
                    case 1: a |= Mask(1) << v; break;
                    case 2: b |= Mask(1) << v; break;
                    default: break;
                }
            }
            if (a == 0 || b == 0) continue;
            ++done;
            ++queries;
            if (g.is_separator(s, a, b) != g.separates_by_paths(s, a, b)) ++mismatches;
        }
    }
    Outcome o;
    o.ok = mismatches == 0;
    o.detail = "200 graphs, " + std::to_string(queries) + " queries, " +
               std::to_string(mismatches) + " route disagreements";
    return o;
}

// 3. Random autoregressive models: the precision matrix vanishes beyond the
//    band of width `order` and every variance respects the 1/delta cap.
Outcome criterion_ar_band_structure() {
    Rng rng(98431207);
    double worst_off_band = 0.0;
    double worst_cap_excess = -1.0;
    for (int t = 0; t < 100; ++t) {
        const int order = static_cast<int>(rng.uniform_int(1, 3));
        const double delta = rng.uniform(0.1, 0.6);
        const double mass = (1.0 - delta) * rng.uniform(0.3, 1.0);
        std::vector<double> w(order);
        double wsum = 0.0;
        for (double& x : w) {
            x = rng.uniform(0.1, 1.0);
            wsum += x;
        }
        std::vector<double> beta(order);
        for (int l = 0; l < order; ++l)
            beta[l] = (rng.coin() ? 1.0 : -1.0) * mass * w[l] / wsum;
        const ArModel model(order, delta, beta);
        const int n = 50;
        const Eigen::MatrixXd sigma = model.leading(n);
        const Eigen::MatrixXd prec = spd_inverse(sigma);
        for (int i = 0; i < n; ++i) {
            worst_cap_excess = std::max(worst_cap_excess, sigma(i, i) - 1.0 / delta);
            for (int j = 0; j < n; ++j)
                if (std::abs(i - j) > order)
                    worst_off_band = std::max(worst_off_band, std::abs(prec(i, j)));
        }
    }
    Outcome o;
    o.ok = worst_off_band < 1e-8 && worst_cap_excess <= 1e-10;
    o.detail = "100 models at size 50: max off-band precision " +
               fmt("%.2e", worst_off_band) + ", max variance-cap excess " +
               fmt("%.2e", worst_cap_excess);
    return o;
}

// 4. Planar lattice blocks: eigenvalues of the leading (2m+1)^2 block stay
//    inside the certified symbol range for V in {0.5, 1, 2}, m up to 3.
Outcome criterion_lattice_spectrum() {
    Outcome o;
    double worst_violation = 0.0;
    int blocks = 0;
    for (double v : {0.5, 1.0, 2.0}) {
        const SymbolCertificate cert = symbol_certificate(v, 2);
        if (!cert.certified || cert.m_g <= 0.0) {
            o.ok = false;
            o.detail = "certificate for variance " + fmt("%.1f", v) + " not positive";
            return o;
        }
        const LatticeModel lat(2, v);
        for (int m = 1; m <= 3; ++m) {
            const int n = (2 * m + 1) * (2 * m + 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lat.leading(n));
            const double lo = es.eigenvalues().minCoeff();
            const double hi = es.eigenvalues().maxCoeff();
            worst_violation = std::max(worst_violation, cert.m_f - lo);
            worst_violation = std::max(worst_violation, hi - cert.M_f);
            ++blocks;
        }
    }
    o.ok = worst_violation <= 1e-8;
    o.detail = std::to_string(blocks) + " blocks across three variances, worst range breach " +
               fmt("%.2e", worst_violation);
    return o;
}

// 5. Decay tables for the half-coupling chain: levels grow pointwise and
//    every certified weighted sum is finite and dominates the plain sum.
Outcome criterion_decay_tables() {
    const ArModel model(1, 0.5, {0.5});
    const DecayTable t = decay_table(model, 200, 4, 2.0, 0.5);
    Outcome o;
    for (size_t lvl = 0; lvl + 1 < t.levels.size(); ++lvl) {
        const double min_gap = (t.levels[lvl + 1] - t.levels[lvl]).minCoeff();
        if (min_gap < 0.0) {
            o.ok = false;
            o.detail = "level " + std::to_string(lvl + 1) + " dips below level " +
                       std::to_string(lvl) + " by " + fmt("%.2e", -min_gap);
            return o;
        }
    }
    int sums = 0;
    for (int lvl = 0; lvl < static_cast<int>(t.levels.size()); ++lvl) {
        for (int row : {1, 100, 200}) {
            const double plain = decay_row_weighted_sum(t, lvl, row, 0.5);
            const double certified = decay_certified_weighted_sum(t, lvl, row, 0.5);
            if (!std::isfinite(plain) || !std::isfinite(certified) || certified < plain) {
                o.ok = false;
                o.detail = "weighted sum at level " + std::to_string(lvl) + " row " +
                           std::to_string(row) + " not certified (" + fmt("%.3e", plain) +
                           " vs " + fmt("%.3e", certified) + ")";
                return o;
            }
            ++sums;
        }
    }
    o.detail = "5 levels monotone on the 200x200 grid, " + std::to_string(sums) +
               " certified weighted sums finite and dominating";
    return o;
}

// 6. Geometric chain: dual-route prefix ratios, the per-step mass bound, and
//    the marginal sandwich with constant exactly e^2 (total mass is 1).
Outcome criterion_geometric_convergence() {
    const IsingModel model = IsingModel::chain_family("geometric", 17);
    Outcome o;
    for (int m = 1; m <= 3; ++m) {
        const DiagnosticReport rep = ising_convergence(model, m, 16, 1e-10);
        for (const char* id :
             {"prefix-ratio-dual-route", "ratio-step-mass-bound", "marginal-sandwich"}) {
            if (!check_passes(rep, id)) {
                o.ok = false;
                o.detail = std::string(id) + " failed at prefix length " + std::to_string(m);
                return o;
            }
        }
        const double big_c = find_check(rep, "marginal-sandwich")->details["C"].get<double>();
        if (std::abs(big_c - std::exp(2.0)) > 1e-12) {
            o.ok = false;
            o.detail = "sandwich constant " + fmt("%.15f", big_c) + " is not exp(2)";
            return o;
        }
    }
    o.detail = "prefix lengths 1-3 up to truncation 16: both routes agree, sandwich constant exp(2)";
    return o;
}

// 7. Conditional prediction dispersion never exceeds the divergence product
//    bound on random 12-coordinate chains.
Outcome criterion_dispersion_bound() {
    Rng rng(55100234);
    double worst_excess = -1.0;
    for (int t = 0; t < 50; ++t) {
        MarkovChainSpec spec;
        spec.pi1 = rng.uniform(0.05, 0.95);
        for (int r = 1; r <= 11; ++r) {
            spec.p.push_back(rng.uniform(0.05, 0.95));
            spec.t.push_back(rng.uniform(0.05, 0.95));
        }
        const int m = static_cast<int>(rng.uniform_int(2, 5));
        const int n_prime = static_cast<int>(rng.uniform_int(m + 2, 12));
        std::vector<int> b_coords, b_values;
        for (int i = 1; i < m; ++i) {
            if (!rng.coin()) continue;
            b_coords.push_back(i);
            b_values.push_back(static_cast<int>(rng.uniform_int(0, 1)));
        }
        const BinaryPmf pmf = chain_pmf(spec);
        const auto event = [n_prime](uint64_t cell) {
            return ((cell >> (n_prime - 1)) & 1ull) == 1ull;
        };
        const double variance = dcp_variance(pmf, event, m, b_coords, b_values);
        const double bound = dcp_product_bound(spec, m, n_prime);
        worst_excess = std::max(worst_excess, variance - bound);
    }
    Outcome o;
    o.ok = worst_excess <= 1e-12;
    o.detail = "50 random chains: max(variance - bound) = " + fmt("%.2e", worst_excess);
    return o;
}

// 8. The counterexample panel: parity signature, latent-offset covariance and
//    positivity, and the moving-average closed-form precision.
Outcome criterion_counterexample_panel() {
    Outcome o;
    const DiagnosticReport parity = parity_report(7, 14);
    const DiagnosticReport theta = theta_shift_report();
    const DiagnosticReport ma = ma_shift_report();
    const struct {
        const DiagnosticReport* rep;
        const char* id;
    } wanted[] = {
        {&parity, "pairwise-independence-exact"},
        {&parity, "joint-dependence-magnitude"},
        {&theta, "offset-covariance-quarter"},
        {&theta, "conditional-covariance-positive"},
        {&ma, "closed-form-precision-match"},
    };
    for (const auto& w : wanted) {
        if (!check_passes(*w.rep, w.id)) {
            o.ok = false;
            o.detail = std::string(w.id) + " did not pass";
            return o;
        }
    }
    o.detail = "parity windows 7-14, latent offset, and moving-average closed form all passed";
    return o;
}

// 9. Every CLI subcommand is byte-deterministic: the same invocation written
//    twice produces identical JSON and CSV artifacts.
int run_cli(const std::string& tail) {
    const std::string cmd = std::string(MARKOVIA_CLI_PATH) + " " + tail + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion_cli_determinism() {
    const std::string cfg = std::string(MARKOVIA_CONFIG_DIR) + "/";
    const std::string merge_in = "acceptance_merge_input.json";
    run_cli("counterexample --which ma-shift --out " + merge_in);
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"check-graphoid", "check-graphoid --pmf random --n 4 --seed 21"},
        {"check-markov", "check-markov --pmf random --n 3 --seed 5"},
        {"audit-equivalence", "audit-equivalence --n 4 --seed 11 --trials 5"},
        {"gaussian-verify", "gaussian-verify --model " + cfg + "ar1.json --sizes 4,8,12"},
        {"gaussian-converge",
         "gaussian-converge --model " + cfg + "ar1.json --targets 0,1 --steps 30"},
        {"ising-exact", "ising-exact --model " + cfg + "ising_single_edge.json --n 2"},
        {"ising-converge", "ising-converge --model " + cfg + "chain_summable.json --m 2 --nmax 12"},
        {"chain-dcp", "chain-dcp --spec " + cfg + "chain12.json --m 3 --nprime 8 --b 1 --xb 1"},
        {"counterexample", "counterexample --which theta-shift"},
        {"merge", "merge " + merge_in + " " + merge_in},
    };
    Outcome o;
    int compared = 0;
    for (const auto& [name, args] : cases) {
        const std::string ja = "acceptance_" + name + "_a.json";
        const std::string jb = "acceptance_" + name + "_b.json";
        const std::string ca = "acceptance_" + name + "_a.csv";
        const std::string cb = "acceptance_" + name + "_b.csv";
        const int ra = run_cli(args + " --out " + ja + " --csv " + ca);
        const int rb = run_cli(args + " --out " + jb + " --csv " + cb);
        const std::string bytes_ja = slurp(ja), bytes_jb = slurp(jb);
        const std::string bytes_ca = slurp(ca), bytes_cb = slurp(cb);
        for (const std::string& f : {ja, jb, ca, cb}) std::remove(f.c_str());
        // trace-less reports legitimately produce empty CSV; only equality matters there
        if (ra != rb || bytes_ja.empty() || bytes_ja != bytes_jb || bytes_ca != bytes_cb) {
            o.ok = false;
            o.detail = name + " reruns diverged (exit " + std::to_string(ra) + " vs " +
                       std::to_string(rb) + ")";
            std::remove(merge_in.c_str());
            return o;
        }
        ++compared;
    }
    std::remove(merge_in.c_str());
    o.detail = std::to_string(compared) + " subcommands rerun, JSON and CSV byte-identical";
    return o;
}

struct Criterion {
    const char* slug;
    double budget_seconds;  // 0 means no budget
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"criterion-1-equivalence-audit", 60.0, criterion_equivalence_audit},
        {"criterion-2-separation-routes", 5.0, criterion_separation_routes},
        {"criterion-3-ar-band-structure", 30.0, criterion_ar_band_structure},
        {"criterion-4-lattice-spectrum", 60.0, criterion_lattice_spectrum},
        {"criterion-5-decay-tables", 30.0, criterion_decay_tables},
        {"criterion-6-geometric-convergence", 120.0, criterion_geometric_convergence},
        {"criterion-7-dispersion-bound", 60.0, criterion_dispersion_bound},
        {"criterion-8-counterexample-panel", 60.0, criterion_counterexample_panel},
        {"criterion-9-cli-determinism", 0.0, criterion_cli_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("unexpected exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
            o.ok = false;
            o.detail += " [exceeded " + fmt("%.0f", c.budget_seconds) + "s budget]";
        }
        std::printf("[%s] %s: %s (%.1fs)\n", o.ok ? "PASS" : "FAIL", c.slug, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!o.ok) ++failures;
    }
    if (failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d of 9 criteria failed\n", failures);
    return 1;
}
