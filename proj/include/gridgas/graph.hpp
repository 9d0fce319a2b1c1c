#pragma once

#include <cstdint>
#include <vector>

#include "gridgas/bitconfig.hpp"
#include "gridgas/errors.hpp"

namespace gridgas {

// Finite undirected graph; vertices are particle sites, edges are hard-core
// exclusions.
struct Graph {
    int vertex_count = 0;
    std::vector<std::vector<std::int32_t>> adjacency;

    Graph() = default;
    explicit Graph(int n) : vertex_count(n), adjacency(n) {}

    void add_edge(int u, int v) {
        adjacency[u].push_back(v);
        adjacency[v].push_back(u);
    }

    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }

    // Symmetry and absence of self-loops; throws on violation.
    void validate() const;
};

// True iff no two occupied sites are adjacent.
bool is_independent(const Configuration& config, const Graph& graph);

// True iff the site is vacant and all its neighbors are vacant.
bool can_add_particle(const Configuration& config, const Graph& graph, int site);

}  // namespace gridgas
