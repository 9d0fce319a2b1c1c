#include "gridgas/enumerate.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

namespace gridgas {

namespace {

void enumerate_rec(int v, int n, std::uint64_t current, std::uint64_t blocked,
                   const std::vector<std::uint64_t>& nbr_mask, std::vector<std::uint64_t>& out) {
    if (v == n) {
        out.push_back(current);
        return;
    }
    enumerate_rec(v + 1, n, current, blocked, nbr_mask, out);
    if (!((blocked >> v) & 1)) {
        enumerate_rec(v + 1, n, current | (std::uint64_t{1} << v), blocked | nbr_mask[v], nbr_mask,
                      out);
    }
}

}  // namespace

int StateSpace::find_state(std::uint64_t key) const {
    auto it = std::lower_bound(states.begin(), states.end(), key);
    if (it == states.end() || *it != key) return -1;
    return static_cast<int>(it - states.begin());
}

StateSpace enumerate_states(const Graph& graph, int cap, std::int64_t neighbor_limit) {
    graph.validate();
    const int n = graph.vertex_count;
    if (n > cap)
        throw validation_error("graph has " + std::to_string(n) + " vertices, above the enumeration cap " +
                               std::to_string(cap) + " (state count may reach 2^" + std::to_string(n) + ")");
    if (n > 64) throw validation_error("enumeration supports at most 64 vertices");

    std::vector<std::uint64_t> nbr_mask(n, 0);
    for (int u = 0; u < n; ++u)
        for (int v : graph.adjacency[u]) nbr_mask[u] |= std::uint64_t{1} << v;

    StateSpace space;
    space.graph = graph;
    enumerate_rec(0, n, 0, 0, nbr_mask, space.states);
    std::sort(space.states.begin(), space.states.end());

    if (static_cast<std::int64_t>(space.states.size()) <= neighbor_limit) build_neighbor_map(space);
    return space;
}

void build_neighbor_map(StateSpace& space) {
    if (space.neighbors_built) return;
    const int n_states = space.state_count();
    const int n_sites = space.site_count();
    std::vector<std::uint64_t> nbr_mask(n_sites, 0);
    for (int u = 0; u < n_sites; ++u)
        for (int v : space.graph.adjacency[u]) nbr_mask[u] |= std::uint64_t{1} << v;

    space.nbr_offsets.assign(n_states + 1, 0);
    for (int s = 0; s < n_states; ++s) {
        std::uint64_t key = space.states[s];
        int moves = 0;
        for (int v = 0; v < n_sites; ++v) {
            if ((key >> v) & 1)
                ++moves;  // removal, always admissible
            else if ((key & nbr_mask[v]) == 0)
                ++moves;  // addition
        }
        space.nbr_offsets[s + 1] = space.nbr_offsets[s] + moves;
    }
    space.nbr_targets.resize(space.nbr_offsets[n_states]);
    space.nbr_delta.resize(space.nbr_offsets[n_states]);
    for (int s = 0; s < n_states; ++s) {
        std::uint64_t key = space.states[s];
        std::int64_t w = space.nbr_offsets[s];
        for (int v = 0; v < n_sites; ++v) {
            bool occupied = (key >> v) & 1;
            if (!occupied && (key & nbr_mask[v]) != 0) continue;
            int t = space.find_state(key ^ (std::uint64_t{1} << v));
            if (t < 0) throw computation_error("single-site update left the state space");
            space.nbr_targets[w] = t;
            space.nbr_delta[w] = occupied ? 1 : 0;  // removal raises the energy by 1
            ++w;
        }
    }
    space.neighbors_built = true;
}

EnergyLandscape as_landscape(const StateSpace& space) {
    if (!space.neighbors_built)
        throw validation_error("state space has no materialized neighbor map; rebuild with a larger limit");
    std::vector<Rational> energies(space.state_count());
    for (int s = 0; s < space.state_count(); ++s) energies[s] = Rational(space.energy(s));
    std::vector<std::pair<int, int>> edges;
    for (int s = 0; s < space.state_count(); ++s) {
        for (std::int64_t i = space.nbr_offsets[s]; i < space.nbr_offsets[s + 1]; ++i) {
            int t = space.nbr_targets[i];
            if (t > s) edges.emplace_back(s, t);
        }
    }
    return EnergyLandscape(std::move(energies), edges, 1.0 / space.site_count());
}

std::vector<int> bottleneck_heights(const StateSpace& space, const std::vector<int>& targets) {
    const int n_states = space.state_count();
    const int n_sites = space.site_count();
    std::vector<std::uint64_t> nbr_mask(n_sites, 0);
    for (int u = 0; u < n_sites; ++u)
        for (int v : space.graph.adjacency[u]) nbr_mask[u] |= std::uint64_t{1} << v;

    const int unset = std::numeric_limits<int>::max();
    std::vector<int> dist(n_states, unset);
    // (height, state), smallest height first; ties by state index.
    using Item = std::pair<int, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (int t : targets) {
        int h = space.energy(t);
        if (h < dist[t]) {
            dist[t] = h;
            pq.emplace(h, t);
        }
    }
    std::vector<char> done(n_states, 0);
    while (!pq.empty()) {
        auto [h, s] = pq.top();
        pq.pop();
        if (done[s]) continue;
        done[s] = 1;
        std::uint64_t key = space.states[s];
        for (int v = 0; v < n_sites; ++v) {
            bool occupied = (key >> v) & 1;
            if (!occupied && (key & nbr_mask[v]) != 0) continue;
            int t = space.find_state(key ^ (std::uint64_t{1} << v));
            int nh = std::max(h, space.energy(t));
            if (nh < dist[t]) {
                dist[t] = nh;
                pq.emplace(nh, t);
            }
        }
    }
    return dist;
}

std::string state_space_to_json(const StateSpace& space) {
    std::ostringstream out;
    int digits = (space.site_count() + 3) / 4;
    out << "{\"schema\":1,\"sites\":" << space.site_count() << ",\"states\":[";
    for (int s = 0; s < space.state_count(); ++s) {
        Configuration c = Configuration::from_key64(space.states[s], space.site_count());
        out << (s ? "," : "") << '"' << c.to_hex() << '"';
        (void)digits;
    }
    out << "],\"energy\":[";
    for (int s = 0; s < space.state_count(); ++s) out << (s ? "," : "") << space.energy(s);
    out << "],\"adjacency\":[";
    for (int s = 0; s < space.state_count(); ++s) {
        out << (s ? "," : "") << '[';
        if (space.neighbors_built) {
            for (std::int64_t i = space.nbr_offsets[s]; i < space.nbr_offsets[s + 1]; ++i)
                out << (i > space.nbr_offsets[s] ? "," : "") << space.nbr_targets[i];
        }
        out << ']';
    }
    out << "]}";
    return out.str();
}

}  // namespace gridgas
