#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "markovia/report.hpp"

using namespace markovia;

namespace {

const std::string kCli = MARKOVIA_CLI_PATH;
const std::string kConfigs = MARKOVIA_CONFIG_DIR;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_env(const std::string& env, const std::string& args) {
    const std::string cmd = env + " " + kCli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string cfg(const std::string& name) { return kConfigs + "/" + name; }

}  // namespace

TEST_CASE("exit codes encode verdicts and errors") {
    // A passing verification exits 0.
    CHECK(run("counterexample --which ma-shift") == 0);
    // Configuration or regime errors exit 1.
    CHECK(run("ising-converge --model " + cfg("chain_harmonic.json") + " --m 2 --nmax 12") == 1);
    CHECK(run("gaussian-verify --model definitely_missing.json") == 1);
    // A failed check exits 2.
    CHECK(run("check-markov --pmf random --n 3 --seed 5 --graph " + cfg("graph_empty3.json")) ==
          2);
    // An inconclusive check (uncertified symbol floor) exits 3.
    CHECK(run("gaussian-verify --model " + cfg("lattice_v8.json") + " --sizes 4,9") == 3);
    // Usage errors from the option parser fold into exit 1, help stays 0.
    CHECK(run("gaussian-verify") == 1);
    CHECK(run("no-such-subcommand") == 1);
    CHECK(run("") == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("gaussian-verify clamps its default block ladder to finite matrices") {
    // 3x3 matrix, no --sizes: the default {4, 9, 16, 25} would overrun it.
    CHECK(run("gaussian-verify --model " + cfg("diag_dominant3.json")) == 0);
    // An explicit oversized request still reports the size cap as an error.
    CHECK(run("gaussian-verify --model " + cfg("diag_dominant3.json") + " --sizes 2,8") == 1);
}

TEST_CASE("reports are byte-identical across reruns and thread counts") {
    const std::string f1 = "e2e_rerun_1.json";
    const std::string f2 = "e2e_rerun_2.json";
    CHECK(run("check-graphoid --pmf random --n 4 --seed 7 --out " + f1) == 0);
    CHECK(run("check-graphoid --pmf random --n 4 --seed 7 --out " + f2) == 0);
    CHECK(slurp(f1) == slurp(f2));
    std::remove(f1.c_str());
    std::remove(f2.c_str());

    const std::string t1 = "e2e_threads_1.json";
    const std::string t4 = "e2e_threads_4.json";
    CHECK(run_env("MARKOVIA_THREADS=1", "counterexample --which theta-shift --out " + t1) == 0);
    CHECK(run_env("MARKOVIA_THREADS=4", "counterexample --which theta-shift --out " + t4) == 0);
    CHECK(slurp(t1) == slurp(t4));
    std::remove(t1.c_str());
    std::remove(t4.c_str());
}

TEST_CASE("csv traces accompany the json report") {
    const std::string fj = "e2e_csv.json";
    const std::string fc = "e2e_csv.csv";
    CHECK(run("counterexample --which ma-shift --out " + fj + " --csv " + fc) == 0);
    const std::string csv = slurp(fc);
    CHECK(csv.rfind("#trace,", 0) == 0);
    DiagnosticReport rep = load_report(fj);
    CHECK(rep.command == "counterexample");
    CHECK(rep.verdict() == Verdict::pass);
    std::remove(fj.c_str());
    std::remove(fc.c_str());
}

TEST_CASE("merge folds reports and keeps the worst verdict") {
    const std::string pass_rep = "e2e_merge_pass.json";
    const std::string fail_rep = "e2e_merge_fail.json";
    const std::string merged = "e2e_merge_out.json";
    CHECK(run("counterexample --which ma-shift --out " + pass_rep) == 0);
    CHECK(run("check-markov --pmf random --n 3 --seed 5 --graph " + cfg("graph_empty3.json") +
              " --out " + fail_rep) == 2);

    // The merged verdict is the worst input verdict, so merge itself exits 2.
    CHECK(run("merge " + pass_rep + " " + fail_rep + " --out " + merged) == 2);
    DiagnosticReport rep = load_report(merged);
    CHECK(rep.verdict() == Verdict::fail);
    const DiagnosticReport a = load_report(pass_rep);
    const DiagnosticReport b = load_report(fail_rep);
    CHECK(rep.checks.size() == a.checks.size() + b.checks.size());

    std::remove(pass_rep.c_str());
    std::remove(fail_rep.c_str());
    std::remove(merged.c_str());
}

TEST_CASE("config-driven subcommands run end to end") {
    CHECK(run("gaussian-verify --model " + cfg("ar1.json")) == 0);
    CHECK(run("gaussian-converge --model " + cfg("ar1.json") + " --targets 0,1 --steps 30") == 0);
    CHECK(run("ising-exact --model " + cfg("ising_single_edge.json") + " --n 2") == 0);
    CHECK(run("ising-converge --model " + cfg("chain_summable.json") + " --m 2 --nmax 12") == 0);
    CHECK(run("chain-dcp --spec " + cfg("chain12.json") + " --m 3 --nprime 8 --b 1 --xb 1") == 0);
    CHECK(run("check-graphoid --pmf " + cfg("pmf_positive3.json") + " --n 3") == 0);
    CHECK(run("audit-equivalence --n 4 --seed 11 --trials 5") == 0);
}
