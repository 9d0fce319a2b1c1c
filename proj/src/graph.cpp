#include "gridgas/graph.hpp"

#include <algorithm>

namespace gridgas {

void Graph::validate() const {
    if (static_cast<int>(adjacency.size()) != vertex_count)
        throw validation_error("graph adjacency size does not match vertex count");
    for (int u = 0; u < vertex_count; ++u) {
        for (int v : adjacency[u]) {
            if (v < 0 || v >= vertex_count) throw validation_error("graph neighbor out of range");
            if (v == u) throw validation_error("graph has a self-loop");
            if (std::find(adjacency[v].begin(), adjacency[v].end(), u) == adjacency[v].end())
                throw validation_error("graph adjacency is not symmetric");
        }
    }
}

bool is_independent(const Configuration& config, const Graph& graph) {
    for (int u = 0; u < graph.vertex_count; ++u) {
        if (!config.occupied(u)) continue;
        for (int v : graph.adjacency[u]) {
            if (v > u && config.occupied(v)) return false;
        }
    }
    return true;
}

bool can_add_particle(const Configuration& config, const Graph& graph, int site) {
    if (config.occupied(site)) return false;
    for (int v : graph.adjacency[site]) {
        if (config.occupied(v)) return false;
    }
    return true;
}

}  // namespace gridgas
