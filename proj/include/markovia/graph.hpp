#pragma once

#include <vector>

#include "markovia/common.hpp"

namespace markovia {

// Undirected graph on vertices 0..n-1 with bitmask adjacency rows (n <= 64).
// Separation follows the path definition: S separates A from B when every
// path between them meets S; with A, B, S pairwise disjoint this reduces to
// "no vertex of B is reachable from A in the subgraph induced on V minus S".
class Graph {
public:
    explicit Graph(int n);

    static Graph empty(int n) { return Graph(n); }
    static Graph complete(int n);
    static Graph path(int n);
    static Graph cycle(int n);
    static Graph random(int n, double edge_prob, Rng& rng);

    int size() const { return n_; }
    void add_edge(int i, int j);
    bool has_edge(int i, int j) const { return contains(adj_[i], j); }
    Mask neighbors(int v) const { return adj_[v]; }
    Mask closure(int v) const { return adj_[v] | (1ull << v); }
    int degree(int v) const { return popcount(adj_[v]); }
    Mask vertex_mask() const { return full_mask(n_); }
    std::vector<std::pair<int, int>> edges() const;

    // Vertices reachable from `start` without entering `blocked` (start
    // vertices inside `blocked` are dropped).
    Mask reachable(Mask start, Mask blocked) const;

    bool is_separator(Mask s, Mask a, Mask b) const;

    // Reference implementation by exhaustive simple-path enumeration; only
    // for small graphs (testing the BFS route).
    bool separates_by_paths(Mask s, Mask a, Mask b) const;

    Graph induced(Mask keep) const;  // compact relabeling in ascending order

private:
    int n_;
    std::vector<Mask> adj_;

    bool any_path_avoiding(int cur, Mask target, Mask forbidden, Mask visited) const;
};

}  // namespace markovia
