#include "markovia/config.hpp"

#include <fstream>
#include <initializer_list>

namespace markovia {

namespace {

void expect_object(const json& j, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + " config must be a JSON object");
}

void reject_unknown_keys(const json& j, const std::string& what,
                         std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + what + " config");
    }
}

const json& require(const json& j, const char* key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string("missing key \"") + key + "\" in " + what + " config");
    return *it;
}

double get_double(const json& j, const char* key, const std::string& what) {
    const json& v = require(j, key, what);
    if (!v.is_number()) throw ConfigError(std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

int get_int(const json& j, const char* key, const std::string& what) {
    const json& v = require(j, key, what);
    if (!v.is_number_integer())
        throw ConfigError(std::string("key \"") + key + "\" must be an integer");
    return v.get<int>();
}

std::string get_string(const json& j, const char* key, const std::string& what) {
    const json& v = require(j, key, what);
    if (!v.is_string()) throw ConfigError(std::string("key \"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<double> get_number_array(const json& v, const std::string& what) {
    if (!v.is_array()) throw ConfigError(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) {
        if (!e.is_number()) throw ConfigError(what + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& v, const std::string& what) {
    if (!v.is_array() || v.empty()) throw ConfigError(what + " must be a nonempty array of rows");
    const size_t rows = v.size();
    const size_t cols = v[0].is_array() ? v[0].size() : 0;
    if (cols == 0) throw ConfigError(what + " rows must be nonempty arrays");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t r = 0; r < rows; ++r) {
        if (!v[r].is_array() || v[r].size() != cols)
            throw ConfigError(what + " rows must all have the same length");
        for (size_t c = 0; c < cols; ++c) {
            if (!v[r][c].is_number()) throw ConfigError(what + " entries must be numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                v[r][c].get<double>();
        }
    }
    return m;
}

std::string config_type(const json& j, const std::string& what) {
    expect_object(j, what);
    return get_string(j, "type", what);
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

std::unique_ptr<CovarianceModel> covariance_model_from_json(const json& j) {
    const std::string type = config_type(j, "covariance model");
    if (type == "lattice") {
        reject_unknown_keys(j, "lattice", {"type", "dim", "variance"});
        return std::make_unique<LatticeModel>(get_int(j, "dim", "lattice"),
                                              get_double(j, "variance", "lattice"));
    }
    if (type == "ar") {
        reject_unknown_keys(j, "ar", {"type", "order", "delta", "beta"});
        return std::make_unique<ArModel>(get_int(j, "order", "ar"), get_double(j, "delta", "ar"),
                                         get_number_array(require(j, "beta", "ar"), "\"beta\""));
    }
    if (type == "diag_dominant") {
        reject_unknown_keys(j, "diag_dominant", {"type", "matrix", "margin"});
        return std::make_unique<DiagDominantModel>(
            matrix_from_json(require(j, "matrix", "diag_dominant"), "\"matrix\""),
            get_double(j, "margin", "diag_dominant"));
    }
    if (type == "explicit") {
        reject_unknown_keys(j, "explicit", {"type", "matrix"});
        return std::make_unique<ExplicitModel>(
            matrix_from_json(require(j, "matrix", "explicit"), "\"matrix\""));
    }
    throw ConfigError("unknown covariance model type: " + type);
}

IsingModel ising_model_from_json(const json& j) {
    const std::string type = config_type(j, "interaction model");
    if (type != "ising") throw ConfigError("unknown interaction model type: " + type);
    if (j.contains("family")) {
        reject_unknown_keys(j, "ising chain", {"type", "family", "rate", "sites"});
        const std::string family = get_string(j, "family", "ising chain");
        if (family != "chain") throw ConfigError("unknown ising family: " + family);
        return IsingModel::chain_family(get_string(j, "rate", "ising chain"),
                                        get_int(j, "sites", "ising chain"));
    }
    reject_unknown_keys(j, "ising", {"type", "regime", "edges", "tail_mass"});
    const json& ej = require(j, "edges", "ising");
    if (!ej.is_array()) throw ConfigError("\"edges\" must be an array of [i, j, theta] triples");
    std::vector<IsingEdge> edges;
    edges.reserve(ej.size());
    for (const json& e : ej) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !e[2].is_number())
            throw ConfigError("\"edges\" must be an array of [i, j, theta] triples");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    const double tail = j.contains("tail_mass") ? get_double(j, "tail_mass", "ising") : 0.0;
    return IsingModel::from_edges(std::move(edges), get_string(j, "regime", "ising"), tail);
}

MarkovChainSpec chain_spec_from_json(const json& j) {
    const std::string type = config_type(j, "chain");
    if (type != "chain") throw ConfigError("unknown chain config type: " + type);
    reject_unknown_keys(j, "chain", {"type", "pi1", "p", "t"});
    MarkovChainSpec spec;
    spec.pi1 = get_double(j, "pi1", "chain");
    spec.p = get_number_array(require(j, "p", "chain"), "\"p\"");
    spec.t = get_number_array(require(j, "t", "chain"), "\"t\"");
    spec.validate();
    return spec;
}

BinaryPmf pmf_from_json(const json& j) {
    const std::string type = config_type(j, "pmf");
    if (type != "pmf") throw ConfigError("unknown pmf config type: " + type);
    reject_unknown_keys(j, "pmf", {"type", "variables", "weights"});
    const int n = get_int(j, "variables", "pmf");
    if (n < 1 || n > 22) throw ConfigError("\"variables\" must be in 1..22");
    std::vector<double> w = get_number_array(require(j, "weights", "pmf"), "\"weights\"");
    if (w.size() != (size_t(1) << n))
        throw ConfigError("\"weights\" must list exactly 2^variables entries");
    double total = 0.0;
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError("\"weights\" must be finite and nonnegative");
        total += v;
    }
    if (!(total > 0.0)) throw ConfigError("\"weights\" must have a positive total");
    for (double& v : w) v /= total;
    return BinaryPmf(n, std::move(w));
}

Graph graph_from_json(const json& j) {
    const std::string type = config_type(j, "graph");
    if (type != "graph") throw ConfigError("unknown graph config type: " + type);
    reject_unknown_keys(j, "graph", {"type", "vertices", "edges"});
    const int n = get_int(j, "vertices", "graph");
    if (n < 1 || n > 64) throw ConfigError("\"vertices\" must be in 1..64");
    Graph g(n);
    const json& ej = require(j, "edges", "graph");
    if (!ej.is_array()) throw ConfigError("\"edges\" must be an array of [i, j] pairs");
    for (const json& e : ej) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw ConfigError("\"edges\" must be an array of [i, j] pairs");
        const int a = e[0].get<int>(), b = e[1].get<int>();
        if (a < 0 || a >= n || b < 0 || b >= n || a == b)
            throw ConfigError("graph edges must join two distinct vertices in range");
        g.add_edge(a, b);
    }
    return g;
}

}  // namespace markovia
