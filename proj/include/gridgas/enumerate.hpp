#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridgas/bitconfig.hpp"
#include "gridgas/graph.hpp"
#include "gridgas/landscape.hpp"

namespace gridgas {

inline constexpr int kDefaultEnumerationCap = 36;

// The hard-core state space of a graph: every independent set, indexed in
// canonical order (numeric value of the occupancy bit-vector, ascending).
struct StateSpace {
    Graph graph;
    std::vector<std::uint64_t> states;  // sorted keys; index = state id
    // Single-site-update adjacency in CSR form; delta = [H(y)-H(x)]^+.
    std::vector<std::int64_t> nbr_offsets;
    std::vector<std::int32_t> nbr_targets;
    std::vector<std::int8_t> nbr_delta;
    bool neighbors_built = false;

    int state_count() const { return static_cast<int>(states.size()); }
    int site_count() const { return graph.vertex_count; }

    int energy(int state) const { return -__builtin_popcountll(states[state]); }

    // -1 if the key does not correspond to an independent set.
    int find_state(std::uint64_t key) const;

    Configuration configuration(int state) const {
        return Configuration::from_key64(states[state], graph.vertex_count);
    }
};

// Branch-and-bound enumeration (include/exclude lowest free vertex) of all
// independent sets. Rejects graphs above the cap with a count bound estimate.
// Neighbor maps are materialized up to `neighbor_limit` states; beyond that
// the on-the-fly sweep below still works.
StateSpace enumerate_states(const Graph& graph, int cap = kDefaultEnumerationCap,
                            std::int64_t neighbor_limit = 500000);

void build_neighbor_map(StateSpace& space);

// Generic landscape with q = 1/N per single-site edge.
EnergyLandscape as_landscape(const StateSpace& space);

// Phi(x, targets) for every state x: best-first bottleneck search over the
// max-so-far energy, with neighbors generated on the fly. Memory stays
// O(states), which keeps 30+ site grids inside the desk-scale budget.
std::vector<int> bottleneck_heights(const StateSpace& space, const std::vector<int>& targets);

// JSON export (states as hex bit-vectors, energies, adjacency).
std::string state_space_to_json(const StateSpace& space);

}  // namespace gridgas
