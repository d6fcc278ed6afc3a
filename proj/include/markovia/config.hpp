#pragma once

#include <memory>
#include <string>

#include "markovia/chain.hpp"
#include "markovia/gaussian.hpp"
#include "markovia/graph.hpp"
#include "markovia/ising.hpp"
#include "markovia/pmf.hpp"
#include "markovia/report.hpp"

namespace markovia {

// Reads and parses a JSON config; IO or syntax problems raise ConfigError.
json load_json_file(const std::string& path);

// Every parser validates the "type" tag, rejects unknown keys, and reports
// the offending key in the ConfigError message.
//
//   {"type": "lattice", "dim": d, "variance": v}
//   {"type": "ar", "order": n, "delta": d, "beta": [b1, ...]}
//   {"type": "diag_dominant", "matrix": [[...], ...], "margin": m}
//   {"type": "explicit", "matrix": [[...], ...]}
std::unique_ptr<CovarianceModel> covariance_model_from_json(const json& j);

//   {"type": "ising", "regime": "finite"|"summable"|"sparse",
//    "edges": [[i, j, theta], ...], "tail_mass": x}
//   {"type": "ising", "family": "chain", "rate": "geometric"|"harmonic",
//    "sites": k}
IsingModel ising_model_from_json(const json& j);

//   {"type": "chain", "pi1": x, "p": [...], "t": [...]}
MarkovChainSpec chain_spec_from_json(const json& j);

//   {"type": "pmf", "variables": n, "weights": [w0, ..., w_{2^n - 1}]}
// Weights are normalized; they must be nonnegative with a positive total.
BinaryPmf pmf_from_json(const json& j);

//   {"type": "graph", "vertices": n, "edges": [[i, j], ...]}
Graph graph_from_json(const json& j);

}  // namespace markovia
