#include "markovia/graph.hpp"

namespace markovia {

Graph::Graph(int n) : n_(n), adj_(static_cast<size_t>(n), 0) {
    if (n < 0 || n > 64) throw SizeCapError("graph size must be in [0, 64]");
}

Graph Graph::complete(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

Graph Graph::path(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph Graph::cycle(int n) {
    Graph g = path(n);
    if (n > 2) g.add_edge(n - 1, 0);
    return g;
}

Graph Graph::random(int n, double edge_prob, Rng& rng) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) g.add_edge(i, j);
    return g;
}

void Graph::add_edge(int i, int j) {
    if (i == j) throw DomainError("self-loops are not allowed");
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DomainError("edge endpoint out of range");
    adj_[i] |= 1ull << j;
    adj_[j] |= 1ull << i;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
}

Mask Graph::reachable(Mask start, Mask blocked) const {
    Mask seen = start & ~blocked;
    Mask frontier = seen;
    while (frontier) {
        Mask next = 0;
        Mask f = frontier;
        while (f) {
            int v = lowest_bit(f);
            f &= f - 1;
            next |= adj_[v];
        }
        next &= ~blocked & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen;
}

bool Graph::is_separator(Mask s, Mask a, Mask b) const {
    if ((a & b) || (a & s) || (b & s)) throw DomainError("separation blocks must be pairwise disjoint");
    if (!a || !b) throw DomainError("separation endpoints must be nonempty");
    return (reachable(a, s) & b) == 0;
}

bool Graph::any_path_avoiding(int cur, Mask target, Mask forbidden, Mask visited) const {
    if (contains(target, cur)) return true;
    Mask nbrs = adj_[cur] & ~visited & ~forbidden;
    while (nbrs) {
        int v = lowest_bit(nbrs);
        nbrs &= nbrs - 1;
        if (any_path_avoiding(v, target, forbidden, visited | (1ull << v))) return true;
    }
    return false;
}

bool Graph::separates_by_paths(Mask s, Mask a, Mask b) const {
    if ((a & b) || (a & s) || (b & s)) throw DomainError("separation blocks must be pairwise disjoint");
    if (!a || !b) throw DomainError("separation endpoints must be nonempty");
    Mask src = a;
    while (src) {
        int v = lowest_bit(src);
        src &= src - 1;
        if (any_path_avoiding(v, b, s, 1ull << v)) return false;
    }
    return true;
}

Graph Graph::induced(Mask keep) const {
    std::vector<int> ids;
    for (int v = 0; v < n_; ++v)
        if (contains(keep, v)) ids.push_back(v);
    Graph g(static_cast<int>(ids.size()));
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j)
            if (has_edge(ids[i], ids[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
}

}  // namespace markovia
