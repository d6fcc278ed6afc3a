#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "markovia/config.hpp"

using namespace markovia;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = "markovia_test_" + name + ".json";
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("json files load or fail with a config error") {
    const std::string good = write_temp("good", R"({"type": "graph", "vertices": 2, "edges": []})");
    json j = load_json_file(good);
    CHECK(j.at("type") == "graph");
    std::remove(good.c_str());

    CHECK_THROWS_AS(load_json_file("definitely_missing_file.json"), ConfigError);

    const std::string broken = write_temp("broken", "{not json");
    CHECK_THROWS_AS(load_json_file(broken), ConfigError);
    std::remove(broken.c_str());
}

TEST_CASE("covariance model parsing dispatches on the type tag") {
    auto lat = covariance_model_from_json(
        json{{"type", "lattice"}, {"dim", 2}, {"variance", 1.0}});
    CHECK(lat->kind() == "lattice");
    CHECK(lat->entry(0, 0) == 1.0);

    auto ar = covariance_model_from_json(
        json{{"type", "ar"}, {"order", 1}, {"delta", 0.5}, {"beta", json::array({0.5})}});
    CHECK(ar->kind() == "ar");
    CHECK(ar->entry(1, 1) == 1.25);

    auto dd = covariance_model_from_json(json{{"type", "diag_dominant"},
                                              {"matrix", json::array({json::array({2.0, 0.5}),
                                                                      json::array({0.5, 2.0})})},
                                              {"margin", 1.0}});
    CHECK(dd->kind() == "diag_dominant");

    auto ex = covariance_model_from_json(
        json{{"type", "explicit"},
             {"matrix", json::array({json::array({1.0, 0.25}), json::array({0.25, 1.0})})}});
    CHECK(ex->kind() == "explicit");
    CHECK(ex->entry(0, 1) == 0.25);

    CHECK_THROWS_AS(covariance_model_from_json(json{{"type", "mystery"}}), ConfigError);
    CHECK_THROWS_AS(covariance_model_from_json(json::array()), ConfigError);
    CHECK_THROWS_AS(covariance_model_from_json(json{{"dim", 2}, {"variance", 1.0}}), ConfigError);
}

TEST_CASE("unknown and missing keys are reported by name") {
    try {
        covariance_model_from_json(
            json{{"type", "lattice"}, {"dim", 2}, {"variance", 1.0}, {"bogus", 1}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    try {
        covariance_model_from_json(json{{"type", "lattice"}, {"dim", 2}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("variance") != std::string::npos);
    }
    // Wrong JSON types are rejected, not coerced.
    CHECK_THROWS_AS(covariance_model_from_json(
                        json{{"type", "lattice"}, {"dim", "two"}, {"variance", 1.0}}),
                    ConfigError);
    CHECK_THROWS_AS(covariance_model_from_json(
                        json{{"type", "ar"}, {"order", 1}, {"delta", 0.5}, {"beta", 0.5}}),
                    ConfigError);
    CHECK_THROWS_AS(
        covariance_model_from_json(json{
            {"type", "explicit"},
            {"matrix", json::array({json::array({1.0, 0.25}), json::array({0.25})})}}),
        ConfigError);
}

TEST_CASE("ising model parsing covers both forms") {
    IsingModel edge = ising_model_from_json(
        json{{"type", "ising"},
             {"regime", "finite"},
             {"edges", json::array({json::array({1, 2, 0.5})})}});
    CHECK(edge.regime() == "finite");
    CHECK(edge.theta(1, 2) == 0.5);

    IsingModel chain = ising_model_from_json(
        json{{"type", "ising"}, {"family", "chain"}, {"rate", "geometric"}, {"sites", 8}});
    CHECK(chain.regime() == "summable");
    CHECK(chain.max_site() == 8);

    IsingModel summable = ising_model_from_json(
        json{{"type", "ising"},
             {"regime", "summable"},
             {"edges", json::array({json::array({1, 2, 0.5})})},
             {"tail_mass", 0.25}});
    CHECK(summable.total_mass() == 0.75);

    // Regime violations surface through the model constructor.
    CHECK_THROWS_AS(
        ising_model_from_json(
            json{{"type", "ising"}, {"family", "chain"}, {"rate", "harmonic"}, {"sites", 8}}),
        RegimeError);
    CHECK_THROWS_AS(ising_model_from_json(json{{"type", "pmf"}}), ConfigError);
    CHECK_THROWS_AS(ising_model_from_json(json{{"type", "ising"},
                                               {"regime", "finite"},
                                               {"edges", json::array({json::array({1, 2})})}}),
                    ConfigError);
}

TEST_CASE("chain, pmf, and graph parsing") {
    MarkovChainSpec spec = chain_spec_from_json(json{{"type", "chain"},
                                                     {"pi1", 0.3},
                                                     {"p", json::array({0.6, 0.55})},
                                                     {"t", json::array({0.2, 0.25})}});
    CHECK(spec.size() == 3);
    CHECK(spec.pi1 == 0.3);
    CHECK_THROWS_AS(chain_spec_from_json(json{{"type", "chain"},
                                              {"pi1", 0.3},
                                              {"p", json::array({0.6})},
                                              {"t", json::array({0.2, 0.25})}}),
                    ConfigError);

    BinaryPmf pmf = pmf_from_json(
        json{{"type", "pmf"}, {"variables", 1}, {"weights", json::array({1.0, 3.0})}});
    CHECK(pmf[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(pmf[1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(pmf_from_json(json{{"type", "pmf"},
                                       {"variables", 2},
                                       {"weights", json::array({1.0, 3.0})}}),
                    ConfigError);
    CHECK_THROWS_AS(pmf_from_json(json{{"type", "pmf"},
                                       {"variables", 1},
                                       {"weights", json::array({-1.0, 3.0})}}),
                    ConfigError);
    CHECK_THROWS_AS(pmf_from_json(json{{"type", "pmf"},
                                       {"variables", 1},
                                       {"weights", json::array({0.0, 0.0})}}),
                    ConfigError);
    CHECK_THROWS_AS(pmf_from_json(json{{"type", "pmf"},
                                       {"variables", 23},
                                       {"weights", json::array({1.0})}}),
                    ConfigError);

    Graph g = graph_from_json(json{{"type", "graph"},
                                   {"vertices", 3},
                                   {"edges", json::array({json::array({0, 1})})}});
    CHECK(g.size() == 3);
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK_THROWS_AS(graph_from_json(json{{"type", "graph"},
                                         {"vertices", 3},
                                         {"edges", json::array({json::array({0, 3})})}}),
                    ConfigError);
    CHECK_THROWS_AS(graph_from_json(json{{"type", "graph"},
                                         {"vertices", 3},
                                         {"edges", json::array({json::array({1, 1})})}}),
                    ConfigError);
    CHECK_THROWS_AS(graph_from_json(json{{"type", "graph"}, {"vertices", 0}, {"edges", json::array()}}),
                    ConfigError);
}
