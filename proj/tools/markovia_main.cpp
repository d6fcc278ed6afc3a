// Command-line front end: every subcommand builds a DiagnosticReport, writes
// it as JSON (stdout or --out) and optionally as CSV traces, then exits with
//   0 = pass, 1 = usage/config/numeric error, 2 = fail, 3 = inconclusive.
// Reports carry the seed and never any clock, so reruns are byte-identical.
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "markovia/chain.hpp"
#include "markovia/config.hpp"
#include "markovia/counterexamples.hpp"
#include "markovia/gaussian.hpp"
#include "markovia/graph.hpp"
#include "markovia/ising.hpp"
#include "markovia/pmf.hpp"
#include "markovia/relation.hpp"
#include "markovia/report.hpp"

namespace {

using namespace markovia;

struct OutputOpts {
    std::string out;
    std::string csv;
};

void add_output_flags(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--out", o.out, "write the JSON report to this path instead of stdout");
    cmd->add_option("--csv", o.csv, "also write the report traces as CSV to this path");
}

int emit(DiagnosticReport& rep, const OutputOpts& o) {
    if (!o.csv.empty()) rep.write_csv(o.csv);
    if (!o.out.empty())
        rep.write_json(o.out);
    else
        std::cout << rep.to_json_string() << "\n";
    switch (rep.verdict()) {
        case Verdict::pass: return 0;
        case Verdict::inconclusive: return 3;
        default: return 2;
    }
}

BinaryPmf pmf_from_source(const std::string& source, int n, uint64_t seed) {
    if (source == "random") {
        Rng rng(seed);
        return BinaryPmf::random_positive(n, rng);
    }
    return pmf_from_json(load_json_file(source));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for graphical Markov models"};
    app.require_subcommand(1);

    std::function<int()> action;

    // ---------------------------------------------------------------- axioms
    {
        auto* cmd = app.add_subcommand("check-graphoid",
                                       "check CI axioms on a discrete distribution");
        auto pmf_src = std::make_shared<std::string>("random");
        auto n = std::make_shared<int>(4);
        auto seed = std::make_shared<uint64_t>(0);
        auto tol = std::make_shared<double>(1e-9);
        auto cap = std::make_shared<int>(7);
        auto samples = std::make_shared<int64_t>(0);
        auto axioms = std::make_shared<std::vector<std::string>>(axiom_names());
        auto general = std::make_shared<bool>(false);
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--pmf", *pmf_src, "pmf config path, or \"random\"");
        cmd->add_option("--n", *n, "variable count for --pmf random");
        cmd->add_option("--seed", *seed, "random seed");
        cmd->add_option("--tol", *tol, "CI distance tolerance");
        cmd->add_option("--cap", *cap, "max variables for exhaustive instantiation");
        cmd->add_option("--samples", *samples, "random instantiations instead of exhaustion");
        cmd->add_option("--axioms", *axioms, "axiom ids to check")->delimiter(',');
        cmd->add_flag("--general-partitions", *general,
                      "cross-validate P5* against full partition enumeration");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                BinaryPmf pmf = pmf_from_source(*pmf_src, *n, *seed);
                CIRelation r = relation_from_discrete(pmf, *tol);
                DiagnosticReport rep;
                rep.command = "check-graphoid";
                rep.seed = *seed;
                rep.tolerance = *tol;
                for (const std::string& ax : *axioms) {
                    AxiomReport ar = check_axiom(r, ax, *cap, *general, *samples, *seed);
                    Check& c = rep.add_check("axiom-" + ax, "ci-axioms", ar.verdict);
                    c.details["instantiations"] = ar.instantiations;
                    c.witnesses = ar.witnesses;
                }
                return emit(rep, *out);
            };
        });
    }

    // ------------------------------------------------------ markov properties
    {
        auto* cmd = app.add_subcommand("check-markov",
                                       "check set-Markov properties against a graph");
        auto pmf_src = std::make_shared<std::string>("random");
        auto n = std::make_shared<int>(4);
        auto seed = std::make_shared<uint64_t>(0);
        auto tol = std::make_shared<double>(1e-9);
        auto graph_path = std::make_shared<std::string>();
        auto property = std::make_shared<std::string>("all");
        auto global_cap = std::make_shared<int>(12);
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--pmf", *pmf_src, "pmf config path, or \"random\"");
        cmd->add_option("--n", *n, "variable count for --pmf random");
        cmd->add_option("--seed", *seed, "random seed");
        cmd->add_option("--tol", *tol, "CI distance tolerance");
        cmd->add_option("--graph", *graph_path,
                        "graph config path (default: the pairwise-failure graph)");
        cmd->add_option("--property", *property, "pairwise, local, global, or all")
            ->check(CLI::IsMember({"pairwise", "local", "global", "all"}));
        cmd->add_option("--global-cap", *global_cap, "max variables for the global check");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                BinaryPmf pmf = pmf_from_source(*pmf_src, *n, *seed);
                CIRelation r = relation_from_discrete(pmf, *tol);
                Graph g = graph_path->empty() ? pairwise_graph(r)
                                              : graph_from_json(load_json_file(*graph_path));
                DiagnosticReport rep;
                rep.command = "check-markov";
                rep.seed = *seed;
                rep.tolerance = *tol;
                std::vector<std::string> which =
                    *property == "all" ? std::vector<std::string>{"pairwise", "local", "global"}
                                       : std::vector<std::string>{*property};
                for (const std::string& w : which) {
                    DiagnosticReport one = check_markov(r, g, w, *global_cap);
                    for (Check& c : one.checks) rep.checks.push_back(std::move(c));
                }
                return emit(rep, *out);
            };
        });
    }

    // --------------------------------------------------- equivalence auditing
    {
        auto* cmd = app.add_subcommand(
            "audit-equivalence", "audit the implication chain between Markov properties");
        auto pmf_src = std::make_shared<std::string>("random");
        auto n = std::make_shared<int>(4);
        auto trials = std::make_shared<int>(1);
        auto seed = std::make_shared<uint64_t>(0);
        auto tol = std::make_shared<double>(1e-9);
        auto axiom_cap = std::make_shared<int>(7);
        auto global_cap = std::make_shared<int>(12);
        auto graph_path = std::make_shared<std::string>();
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--pmf", *pmf_src, "pmf config path, or \"random\"");
        cmd->add_option("--n", *n, "variable count for --pmf random");
        cmd->add_option("--trials", *trials, "number of random pmfs to audit")
            ->check(CLI::Range(1, 100000));
        cmd->add_option("--seed", *seed, "random seed");
        cmd->add_option("--tol", *tol, "CI distance tolerance");
        cmd->add_option("--axiom-cap", *axiom_cap, "max variables for axiom instantiation");
        cmd->add_option("--global-cap", *global_cap, "max variables for the global check");
        cmd->add_option("--graph", *graph_path,
                        "graph config path (default: the pairwise-failure graph)");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                DiagnosticReport rep;
                rep.command = "audit-equivalence";
                rep.seed = *seed;
                rep.tolerance = *tol;
                const std::vector<std::string> ids = {"global-implies-local",
                                                      "local-implies-pairwise",
                                                      "pairwise-implies-global-under-axioms"};
                std::vector<Verdict> agg(ids.size(), Verdict::pass);
                std::vector<json> bad(ids.size(), json::array());
                Trace tr;
                tr.name = "trials";
                tr.columns = {"trial", "pairwise", "local", "global", "axioms_pass"};
                const int runs = *pmf_src == "random" ? *trials : 1;
                Rng rng(*seed);
                for (int trial = 0; trial < runs; ++trial) {
                    BinaryPmf pmf = *pmf_src == "random"
                                        ? BinaryPmf::random_positive(*n, rng)
                                        : pmf_from_json(load_json_file(*pmf_src));
                    CIRelation r = relation_from_discrete(pmf, *tol);
                    Graph g = graph_path->empty()
                                  ? pairwise_graph(r)
                                  : graph_from_json(load_json_file(*graph_path));
                    DiagnosticReport one = equivalence_audit(r, g, *axiom_cap, *global_cap);
                    const json& props = one.checks[0].details["properties"];
                    bool axioms_pass = true;
                    for (const auto& kv : one.checks[0].details["axioms"].items())
                        if (kv.value() != "pass") axioms_pass = false;
                    tr.add_row({std::to_string(trial),
                                props["pairwise"].get<bool>() ? "1" : "0",
                                props["local"].get<bool>() ? "1" : "0",
                                props["global"].get<bool>() ? "1" : "0",
                                axioms_pass ? "1" : "0"});
                    for (size_t k = 0; k < ids.size(); ++k) {
                        agg[k] = worst(agg[k], one.checks[k].verdict);
                        if (one.checks[k].verdict != Verdict::pass &&
                            bad[k].size() < 20)
                            bad[k].push_back(json{{"trial", trial},
                                                  {"verdict", to_string(one.checks[k].verdict)},
                                                  {"witnesses", one.checks[k].witnesses}});
                    }
                }
                for (size_t k = 0; k < ids.size(); ++k) {
                    Check& c = rep.add_check(ids[k], "set-markov-implications", agg[k]);
                    c.details["trials"] = runs;
                    c.witnesses = bad[k];
                }
                rep.add_trace(std::move(tr));
                return emit(rep, *out);
            };
        });
    }

    // ---------------------------------------------------------- gaussian side
    {
        auto* cmd = app.add_subcommand("gaussian-verify",
                                       "verify covariance-model conditions on nested blocks");
        auto model_path = std::make_shared<std::string>();
        auto sizes = std::make_shared<std::vector<int>>(std::vector<int>{4, 9, 16, 25});
        auto tol = std::make_shared<double>(1e-8);
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--model", *model_path, "covariance model config path")->required();
        cmd->add_option("--sizes", *sizes, "leading block sizes")->delimiter(',');
        cmd->add_option("--tol", *tol, "numeric tolerance");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            const bool sizes_given = cmd->count("--sizes") > 0;
            action = [=]() {
                auto model = covariance_model_from_json(load_json_file(*model_path));
                std::vector<int> blocks = *sizes;
                // default block ladder clamped to finite matrices
                if (!sizes_given && model->finite_size() > 0) {
                    const int n = model->finite_size();
                    blocks.clear();
                    for (int s : *sizes)
                        if (s < n) blocks.push_back(s);
                    blocks.push_back(n);
                }
                DiagnosticReport rep = verify_covariance_conditions(*model, blocks, *tol);
                return emit(rep, *out);
            };
        });
    }
    {
        auto* cmd = app.add_subcommand(
            "gaussian-converge", "track conditional covariances under growing conditioning");
        auto model_path = std::make_shared<std::string>();
        auto targets = std::make_shared<std::vector<int>>(std::vector<int>{0, 1});
        auto steps = std::make_shared<int>(40);
        auto tol = std::make_shared<double>(1e-6);
        auto cond_cap = std::make_shared<double>(1e12);
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--model", *model_path, "covariance model config path")->required();
        cmd->add_option("--targets", *targets, "target indices (0-based)")->delimiter(',');
        cmd->add_option("--steps", *steps, "number of growing conditioning sets");
        cmd->add_option("--tol", *tol, "Cauchy-tail tolerance");
        cmd->add_option("--cond-cap", *cond_cap, "condition-number cap for inversions");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                auto model = covariance_model_from_json(load_json_file(*model_path));
                DiagnosticReport rep =
                    conditional_convergence(*model, *targets, *steps, *tol, *cond_cap);
                return emit(rep, *out);
            };
        });
    }

    // ------------------------------------------------------- interaction side
    {
        auto* cmd = app.add_subcommand("ising-exact",
                                       "exact truncated table diagnostics for a lattice model");
        auto model_path = std::make_shared<std::string>();
        auto n = std::make_shared<int>(10);
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--model", *model_path, "interaction model config path")->required();
        cmd->add_option("--n", *n, "truncation size");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                IsingModel model = ising_model_from_json(load_json_file(*model_path));
                DiagnosticReport rep = ising_exact_report(model, *n);
                return emit(rep, *out);
            };
        });
    }
    {
        auto* cmd = app.add_subcommand("ising-converge",
                                       "prefix-marginal convergence under growing truncations");
        auto model_path = std::make_shared<std::string>();
        auto m = std::make_shared<int>(2);
        auto n_max = std::make_shared<int>(16);
        auto tol = std::make_shared<double>(1e-10);
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--model", *model_path, "interaction model config path")->required();
        cmd->add_option("--m", *m, "prefix length");
        cmd->add_option("--nmax", *n_max, "largest truncation");
        cmd->add_option("--tol", *tol, "dual-route tolerance");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                IsingModel model = ising_model_from_json(load_json_file(*model_path));
                DiagnosticReport rep = ising_convergence(model, *m, *n_max, *tol);
                return emit(rep, *out);
            };
        });
    }

    // -------------------------------------------------------------- chain dcp
    {
        auto* cmd = app.add_subcommand(
            "chain-dcp", "conditional-prediction dispersion bound for a two-state chain");
        auto spec_path = std::make_shared<std::string>();
        auto m = std::make_shared<int>(3);
        auto n_prime = std::make_shared<int>(0);
        auto b = std::make_shared<std::vector<int>>();
        auto xb = std::make_shared<std::vector<int>>();
        auto tol = std::make_shared<double>(1e-12);
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--spec", *spec_path, "chain config path")->required();
        cmd->add_option("--m", *m, "prefix length");
        cmd->add_option("--nprime", *n_prime, "predicted coordinate (default: chain size)");
        cmd->add_option("--b", *b, "extra conditioning coordinates (1-based, below m)")
            ->delimiter(',');
        cmd->add_option("--xb", *xb, "values for the conditioning coordinates")->delimiter(',');
        cmd->add_option("--tol", *tol, "bound slack");
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                MarkovChainSpec spec = chain_spec_from_json(load_json_file(*spec_path));
                const int np = *n_prime > 0 ? *n_prime : spec.size();
                DiagnosticReport rep = chain_dcp_report(spec, *m, np, *b, *xb, *tol);
                return emit(rep, *out);
            };
        });
    }

    // --------------------------------------------------------- counterexamples
    {
        auto* cmd = app.add_subcommand("counterexample",
                                       "rebuild a packaged counterexample and verify its facts");
        auto which = std::make_shared<std::string>();
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("--which", *which, "parity, theta-shift, or ma-shift")
            ->required()
            ->check(CLI::IsMember({"parity", "theta-shift", "ma-shift"}));
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                DiagnosticReport rep = *which == "parity"     ? parity_report()
                                       : *which == "ma-shift" ? ma_shift_report()
                                                              : theta_shift_report();
                return emit(rep, *out);
            };
        });
    }

    // ------------------------------------------------------------------ merge
    {
        auto* cmd = app.add_subcommand("merge", "merge report files into one");
        auto inputs = std::make_shared<std::vector<std::string>>();
        auto out = std::make_shared<OutputOpts>();
        cmd->add_option("inputs", *inputs, "report JSON files")->required()->expected(-1);
        add_output_flags(cmd, *out);
        cmd->callback([=, &action]() mutable {
            action = [=]() {
                std::vector<DiagnosticReport> reps;
                for (const std::string& path : *inputs) reps.push_back(load_report(path));
                DiagnosticReport rep = merge_reports(reps);
                return emit(rep, *out);
            };
        });
    }

    try {
        app.parse(argc, argv);
        return action();
    } catch (const CLI::ParseError& e) {
        // app.exit prints the message (or help text); fold CLI11's assorted
        // parse-error codes into the usage-error exit 1, keeping --help at 0
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "markovia: config error: " << e.what() << "\n";
    } catch (const RegimeError& e) {
        std::cerr << "markovia: regime error: " << e.what() << "\n";
    } catch (const SizeCapError& e) {
        std::cerr << "markovia: size cap: " << e.what() << "\n";
    } catch (const NumericError& e) {
        std::cerr << "markovia: numeric error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        std::cerr << "markovia: domain error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "markovia: error: " << e.what() << "\n";
    }
    return 1;
}
