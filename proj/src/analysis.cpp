#include "gridgas/analysis.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace gridgas {

namespace {

std::vector<char> membership_mask(int n, const std::vector<int>& set) {
    std::vector<char> mask(n, 0);
    for (int s : set) {
        if (s < 0 || s >= n) throw validation_error("state index out of range");
        mask[s] = 1;
    }
    return mask;
}

struct RationalItem {
    Rational value;
    int state;
    bool operator>(const RationalItem& other) const {
        if (value != other.value) return other.value < value;
        return state > other.state;
    }
};

using MinQueue = std::priority_queue<RationalItem, std::vector<RationalItem>, std::greater<RationalItem>>;

}  // namespace

// ---------------------------------------------------------------------------
// Communication heights
// ---------------------------------------------------------------------------

std::vector<Rational> bottleneck_from(const EnergyLandscape& land, const std::vector<int>& sources) {
    if (sources.empty()) throw validation_error("bottleneck search needs a nonempty source set");
    const int n = land.state_count();
    std::vector<Rational> dist(n);
    std::vector<char> has(n, 0), done(n, 0);
    MinQueue pq;
    for (int s : sources) {
        if (s < 0 || s >= n) throw validation_error("source state out of range");
        Rational h = land.energy(s);
        if (!has[s] || h < dist[s]) {
            dist[s] = h;
            has[s] = 1;
            pq.push({h, s});
        }
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (const auto* e = land.neighbors_begin(u); e != land.neighbors_end(u); ++e) {
            int v = e->target;
            Rational nd = rational_max(d, land.energy(v));
            if (!has[v] || nd < dist[v]) {
                dist[v] = nd;
                has[v] = 1;
                pq.push({nd, v});
            }
        }
    }
    for (int s = 0; s < n; ++s) {
        if (!done[s]) throw computation_error("bottleneck search did not reach every state");
    }
    return dist;
}

Rational communication_height(const EnergyLandscape& land, int x, const std::vector<int>& targets) {
    if (targets.empty()) throw validation_error("communication height needs a nonempty target set");
    std::vector<Rational> dist = bottleneck_from(land, {x});
    bool first = true;
    Rational best{0};
    for (int t : targets) {
        if (first || dist[t] < best) best = dist[t];
        first = false;
    }
    return best;
}

Rational communication_height(const EnergyLandscape& land, int x, int y) {
    return communication_height(land, x, std::vector<int>{y});
}

std::vector<int> complete_targets(const EnergyLandscape& land, int x, std::vector<int> targets) {
    const int n = land.state_count();
    if (targets.empty()) throw validation_error("target set is empty");
    std::vector<char> in_a = membership_mask(n, targets);
    if (x < 0 || x >= n) throw validation_error("state index out of range");
    if (in_a[x]) {
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        return targets;
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(x);
    seen[x] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (const auto* e = land.neighbors_begin(u); e != land.neighbors_end(u); ++e) {
            int v = e->target;
            if (!seen[v] && !in_a[v]) {
                seen[v] = 1;
                q.push(v);
            }
        }
    }
    std::vector<int> completed;
    for (int s = 0; s < n; ++s) {
        if (in_a[s] || !seen[s]) completed.push_back(s);
    }
    return completed;
}

// ---------------------------------------------------------------------------
// Maximal cycle partition: union-find over the energy sublevel filtration
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent, rank_;
    explicit UnionFind(int n) : parent(n, -1), rank_(n, 0) {}
    int find(int x) {
        int r = x;
        while (parent[r] != r) r = parent[r];
        while (parent[x] != r) {
            int next = parent[x];
            parent[x] = r;
            x = next;
        }
        return r;
    }
};

struct OpenNode {
    std::vector<int> members;
    Rational bottom{0};
};

// Shared engine: grows sublevel components inside B; a component dies when it
// first touches the exterior (an A-state or a state adjacent through dead
// territory). Death closes the pre-level sub-components as maximal cycles.
CyclePartition run_partition(const EnergyLandscape& land, const std::vector<char>& in_b) {
    const int n = land.state_count();
    CyclePartition out;
    out.cycle_of_state.assign(n, -1);
    out.exit_height.assign(n, Rational(0));

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (land.energy(a) != land.energy(b)) return land.energy(a) < land.energy(b);
        return a < b;
    });

    UnionFind uf(n);
    std::vector<char> active(n, 0);
    std::vector<char> contaminated(n, 0);   // per root
    std::vector<int> open_node(n, -1);      // per root
    std::vector<OpenNode> pool;

    // level-scoped root attributes
    std::vector<int> stamp(n, -1);
    std::vector<std::vector<int>> merged(n), fresh(n);
    std::vector<int> touched;
    int level_seq = 0;

    auto touch = [&](int r) {
        if (stamp[r] != level_seq) {
            stamp[r] = level_seq;
            merged[r].clear();
            if (open_node[r] >= 0) merged[r].push_back(open_node[r]);
            fresh[r].clear();
            touched.push_back(r);
        }
    };

    auto unite = [&](int a, int b) {
        int ra = uf.find(a), rb = uf.find(b);
        if (ra == rb) return;
        touch(ra);
        touch(rb);
        if (uf.rank_[ra] < uf.rank_[rb]) std::swap(ra, rb);
        if (uf.rank_[ra] == uf.rank_[rb]) ++uf.rank_[ra];
        uf.parent[rb] = ra;
        contaminated[ra] = contaminated[ra] || contaminated[rb];
        if (merged[ra].size() < merged[rb].size()) merged[ra].swap(merged[rb]);
        merged[ra].insert(merged[ra].end(), merged[rb].begin(), merged[rb].end());
        if (fresh[ra].size() < fresh[rb].size()) fresh[ra].swap(fresh[rb]);
        fresh[ra].insert(fresh[ra].end(), fresh[rb].begin(), fresh[rb].end());
    };

    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        Rational h = land.energy(order[i]);
        while (j < order.size() && land.energy(order[j]) == h) ++j;
        ++level_seq;
        touched.clear();

        for (std::size_t k = i; k < j; ++k) {
            int s = order[k];
            uf.parent[s] = s;
            active[s] = 1;
            contaminated[s] = !in_b[s];
            open_node[s] = -1;
            touch(s);
            fresh[s].push_back(s);
        }
        for (std::size_t k = i; k < j; ++k) {
            int s = order[k];
            for (const auto* e = land.neighbors_begin(s); e != land.neighbors_end(s); ++e) {
                if (active[e->target]) unite(s, e->target);
            }
        }

        for (int t : touched) {
            int r = uf.find(t);
            if (stamp[r] != level_seq) continue;  // processed or merged away
            stamp[r] = -2;                        // mark processed for this level
            if (contaminated[r]) {
                for (int node_id : merged[r]) {
                    OpenNode& node = pool[node_id];
                    PartitionCycle cyc;
                    cyc.members = std::move(node.members);
                    cyc.bottom_energy = node.bottom;
                    cyc.death_level = h;
                    cyc.depth = h - node.bottom;
                    cyc.trivial = false;
                    int id = static_cast<int>(out.cycles.size());
                    for (int s : cyc.members) {
                        out.cycle_of_state[s] = id;
                        out.exit_height[s] = h;
                    }
                    std::sort(cyc.members.begin(), cyc.members.end());
                    out.cycles.push_back(std::move(cyc));
                }
                for (int s : fresh[r]) {
                    if (!in_b[s]) continue;
                    PartitionCycle cyc;
                    cyc.members = {s};
                    cyc.bottom_energy = h;
                    cyc.death_level = h;
                    cyc.depth = Rational(0);
                    cyc.trivial = true;
                    out.cycle_of_state[s] = static_cast<int>(out.cycles.size());
                    out.exit_height[s] = h;
                    out.cycles.push_back(std::move(cyc));
                }
                open_node[r] = -1;
            } else {
                // all states in an uncontaminated group lie in B
                std::size_t best = 0;
                for (std::size_t m = 1; m < merged[r].size(); ++m) {
                    if (pool[merged[r][m]].members.size() > pool[merged[r][best]].members.size())
                        best = m;
                }
                OpenNode node;
                if (!merged[r].empty()) {
                    node = std::move(pool[merged[r][best]]);
                    for (std::size_t m = 0; m < merged[r].size(); ++m) {
                        if (m == best) continue;
                        OpenNode& other = pool[merged[r][m]];
                        node.members.insert(node.members.end(), other.members.begin(), other.members.end());
                        node.bottom = rational_min(node.bottom, other.bottom);
                        other.members.clear();
                    }
                } else {
                    node.bottom = h;
                }
                node.members.insert(node.members.end(), fresh[r].begin(), fresh[r].end());
                open_node[r] = static_cast<int>(pool.size());
                pool.push_back(std::move(node));
            }
        }
        i = j;
    }

    for (int s = 0; s < n; ++s) {
        if (in_b[s] && out.cycle_of_state[s] < 0)
            throw computation_error("cycle partition left a state unassigned");
        if (!in_b[s]) out.exit_height[s] = land.energy(s);
    }
    return out;
}

Rational max_depth_of_partition(const CyclePartition& part) {
    Rational best{0};
    for (const auto& c : part.cycles) best = rational_max(best, c.depth);
    return best;
}

}  // namespace

CyclePartition maximal_cycle_partition(const EnergyLandscape& land, const std::vector<int>& subset) {
    const int n = land.state_count();
    if (subset.empty()) throw validation_error("cycle partition of an empty subset");
    std::vector<char> in_b = membership_mask(n, subset);
    int count = 0;
    for (char c : in_b) count += c;
    if (count == n) throw validation_error("cycle partition requires a proper subset (no external boundary)");
    return run_partition(land, in_b);
}

Rational max_depth(const EnergyLandscape& land, const std::vector<int>& subset) {
    const int n = land.state_count();
    CyclePartition part = maximal_cycle_partition(land, subset);
    Rational via_partition = max_depth_of_partition(part);

    // equivalent characterization: max over x in B of min over y outside B
    // of Phi(x,y) - H(x)
    std::vector<char> in_b = membership_mask(n, subset);
    std::vector<int> exterior;
    for (int s = 0; s < n; ++s)
        if (!in_b[s]) exterior.push_back(s);
    std::vector<Rational> phi = bottleneck_from(land, exterior);
    Rational via_heights{0};
    for (int s : subset) via_heights = rational_max(via_heights, phi[s] - land.energy(s));

    if (via_partition != via_heights)
        throw computation_error("maximum-depth characterizations disagree: " + via_partition.str() +
                                " vs " + via_heights.str());
    return via_partition;
}

namespace {

Rational max_depth_allow_empty(const EnergyLandscape& land, const std::vector<int>& subset) {
    if (subset.empty()) return Rational(0);
    return max_depth(land, subset);
}

}  // namespace

// ---------------------------------------------------------------------------
// Cycles as public objects
// ---------------------------------------------------------------------------

namespace {

Cycle make_cycle(const EnergyLandscape& land, std::vector<int> members) {
    Cycle c;
    std::sort(members.begin(), members.end());
    c.members = std::move(members);
    std::vector<char> inside = membership_mask(land.state_count(), c.members);
    Rational bottom = land.energy(c.members[0]);
    for (int s : c.members) bottom = rational_min(bottom, land.energy(s));
    for (int s : c.members)
        if (land.energy(s) == bottom) c.bottom.push_back(s);

    bool have_boundary = false;
    Rational boundary_min{0};
    std::vector<char> on_boundary(land.state_count(), 0);
    for (int s : c.members) {
        for (const auto* e = land.neighbors_begin(s); e != land.neighbors_end(s); ++e) {
            int v = e->target;
            if (inside[v] || on_boundary[v]) continue;
            on_boundary[v] = 1;
            if (!have_boundary || land.energy(v) < boundary_min) {
                boundary_min = land.energy(v);
                have_boundary = true;
            }
        }
    }
    if (!have_boundary) {
        c.whole_space = true;
        c.trivial = false;
        c.depth = Rational(0);
        return c;
    }
    for (int v = 0; v < land.state_count(); ++v)
        if (on_boundary[v] && land.energy(v) == boundary_min) c.principal_boundary.push_back(v);

    Rational top = land.energy(c.members[0]);
    for (int s : c.members) top = rational_max(top, land.energy(s));
    if (top < boundary_min) {
        c.trivial = false;
        c.depth = boundary_min - bottom;
    } else {
        if (c.members.size() != 1)
            throw computation_error("non-singleton set fails the cycle condition");
        c.trivial = true;
        c.depth = Rational(0);
    }
    return c;
}

}  // namespace

Cycle initial_cycle(const EnergyLandscape& land, int x, std::vector<int> targets) {
    targets = complete_targets(land, x, targets);
    std::vector<char> in_a = membership_mask(land.state_count(), targets);
    if (in_a[x]) {
        // C_A(x) = {x} counts as trivial with zero depth when x is a target
        Cycle c = make_cycle(land, {x});
        c.trivial = true;
        c.depth = Rational(0);
        return c;
    }
    std::vector<Rational> phi = bottleneck_from(land, {x});
    bool first = true;
    Rational phi_a{0};
    for (int t : targets) {
        if (first || phi[t] < phi_a) phi_a = phi[t];
        first = false;
    }
    std::vector<int> members{x};
    for (int z = 0; z < land.state_count(); ++z) {
        if (z != x && phi[z] < phi_a) members.push_back(z);
    }
    return make_cycle(land, std::move(members));
}

Rational initial_cycle_depth(const EnergyLandscape& land, int x, std::vector<int> targets) {
    return initial_cycle(land, x, std::move(targets)).depth;
}

RelevantCycle relevant_cycle(const EnergyLandscape& land, int x, std::vector<int> targets) {
    targets = complete_targets(land, x, targets);
    std::vector<char> in_a = membership_mask(land.state_count(), targets);
    if (in_a[x]) throw validation_error("relevant cycle requires x outside the (completed) target set");
    std::vector<Rational> phi = bottleneck_from(land, {x});
    bool first = true;
    Rational phi_a{0};
    for (int t : targets) {
        if (first || phi[t] < phi_a) phi_a = phi[t];
        first = false;
    }
    std::vector<int> members;
    for (int z = 0; z < land.state_count(); ++z)
        if (phi[z] <= phi_a) members.push_back(z);
    RelevantCycle rc;
    rc.cycle = make_cycle(land, std::move(members));
    rc.phi = phi_a;
    if (!rc.cycle.whole_space)
        rc.delta0 = land.energy(rc.cycle.principal_boundary[0]) - phi_a;
    return rc;
}

// ---------------------------------------------------------------------------
// Stability levels via the cycle tree
// ---------------------------------------------------------------------------

namespace {

std::vector<int> leaf_index(const CycleTree& tree) {
    std::vector<int> leaf;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].state) {
            int s = *tree.nodes[i].state;
            if (s >= static_cast<int>(leaf.size())) leaf.resize(s + 1, -1);
            leaf[s] = static_cast<int>(i);
        }
    }
    return leaf;
}

}  // namespace

StabilityLevel stability_level(const EnergyLandscape& land, int x) {
    CycleTree tree = cycle_tree(land);
    std::vector<int> leaf = leaf_index(tree);
    Rational hx = land.energy(x);
    int node = leaf[x];
    while (tree.nodes[node].parent >= 0) {
        int up = tree.nodes[node].parent;
        if (tree.nodes[up].bottom < hx) {
            // the merge level of that ancestor is its top energy
            return StabilityLevel{false, tree.nodes[up].top - hx};
        }
        node = up;
    }
    return StabilityLevel{true, Rational(0)};
}

std::vector<int> stable_states(const EnergyLandscape& land) {
    Rational best = land.energy(0);
    for (int s = 1; s < land.state_count(); ++s) best = rational_min(best, land.energy(s));
    std::vector<int> out;
    for (int s = 0; s < land.state_count(); ++s)
        if (land.energy(s) == best) out.push_back(s);
    return out;
}

std::vector<int> metastable_states(const EnergyLandscape& land) {
    CycleTree tree = cycle_tree(land);
    std::vector<int> leaf = leaf_index(tree);
    Rational global_min = land.energy(0);
    for (int s = 1; s < land.state_count(); ++s) global_min = rational_min(global_min, land.energy(s));

    std::vector<int> out;
    bool have = false;
    Rational best{0};
    for (int x = 0; x < land.state_count(); ++x) {
        if (land.energy(x) == global_min) continue;  // stable
        Rational hx = land.energy(x);
        int node = leaf[x];
        std::optional<Rational> level;
        while (tree.nodes[node].parent >= 0) {
            int up = tree.nodes[node].parent;
            if (tree.nodes[up].bottom < hx) {
                level = tree.nodes[up].top - hx;
                break;
            }
            node = up;
        }
        if (!level) throw computation_error("non-stable state admitted no descent level");
        if (!have || best < *level) {
            best = *level;
            out.clear();
            have = true;
        }
        if (*level == best) out.push_back(x);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Optimal path structure
// ---------------------------------------------------------------------------

namespace {

struct QueryContext {
    std::vector<int> targets;        // completed
    std::vector<char> in_a;
    std::vector<Rational> phi_x;     // from x
    Rational phi_a{0};               // Phi(x, A)
    std::vector<char> in_cplus;      // Phi(x,z) <= Phi(x,A)
};

QueryContext build_query(const EnergyLandscape& land, int x, std::vector<int> targets) {
    QueryContext ctx;
    ctx.targets = complete_targets(land, x, std::move(targets));
    ctx.in_a = membership_mask(land.state_count(), ctx.targets);
    if (ctx.in_a[x]) throw validation_error("query requires x outside the (completed) target set");
    ctx.phi_x = bottleneck_from(land, {x});
    bool first = true;
    for (int t : ctx.targets) {
        if (first || ctx.phi_x[t] < ctx.phi_a) ctx.phi_a = ctx.phi_x[t];
        first = false;
    }
    ctx.in_cplus.assign(land.state_count(), 0);
    for (int z = 0; z < land.state_count(); ++z)
        if (ctx.phi_x[z] <= ctx.phi_a) ctx.in_cplus[z] = 1;
    return ctx;
}

std::vector<int> optimal_states_impl(const EnergyLandscape& land, int x, const QueryContext& ctx) {
    const int n = land.state_count();
    // forward reachability from x inside C+ \ A
    std::vector<char> fwd(n, 0);
    std::queue<int> q;
    fwd[x] = 1;
    q.push(x);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (const auto* e = land.neighbors_begin(u); e != land.neighbors_end(u); ++e) {
            int v = e->target;
            if (!fwd[v] && ctx.in_cplus[v] && !ctx.in_a[v]) {
                fwd[v] = 1;
                q.push(v);
            }
        }
    }
    // backward reachability to A-in-C+ through C+ \ A
    std::vector<char> bwd(n, 0);
    for (int a : ctx.targets) {
        if (!ctx.in_cplus[a]) continue;
        for (const auto* e = land.neighbors_begin(a); e != land.neighbors_end(a); ++e) {
            int v = e->target;
            if (!bwd[v] && ctx.in_cplus[v] && !ctx.in_a[v]) {
                bwd[v] = 1;
                q.push(v);
            }
        }
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (const auto* e = land.neighbors_begin(u); e != land.neighbors_end(u); ++e) {
            int v = e->target;
            if (!bwd[v] && ctx.in_cplus[v] && !ctx.in_a[v]) {
                bwd[v] = 1;
                q.push(v);
            }
        }
    }
    std::vector<char> core(n, 0);
    std::vector<int> result;
    for (int z = 0; z < n; ++z) {
        if (fwd[z] && bwd[z]) {
            core[z] = 1;
            result.push_back(z);
        }
    }
    // endpoint states of A reachable in one step from the core
    for (int a : ctx.targets) {
        if (!ctx.in_cplus[a]) continue;
        for (const auto* e = land.neighbors_begin(a); e != land.neighbors_end(a); ++e) {
            if (core[e->target]) {
                result.push_back(a);
                break;
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

}  // namespace

std::vector<int> optimal_states(const EnergyLandscape& land, int x, std::vector<int> targets) {
    QueryContext ctx = build_query(land, x, std::move(targets));
    return optimal_states_impl(land, x, ctx);
}

PsiExponents psi_exponents(const EnergyLandscape& land, int x, std::vector<int> targets) {
    QueryContext ctx = build_query(land, x, std::move(targets));
    std::vector<int> r_states = optimal_states_impl(land, x, ctx);

    PsiExponents out;

    // Psi_max = max depth of R_A(x) \ A
    std::vector<int> r_minus_a;
    for (int z : r_states)
        if (!ctx.in_a[z]) r_minus_a.push_back(z);
    out.psi_max = max_depth_allow_empty(land, r_minus_a);

    // Psi_min: bottleneck over optimal paths of the deepest initial cycle
    // visited; feasibility scan over the sorted distinct depth values.
    CyclePartition part = maximal_cycle_partition(land, [&] {
        std::vector<int> b;
        for (int s = 0; s < land.state_count(); ++s)
            if (!ctx.in_a[s]) b.push_back(s);
        return b;
    }());
    auto depth_of = [&](int z) { return part.cycles[part.cycle_of_state[z]].depth; };

    std::vector<Rational> candidates;
    for (int z : r_minus_a) candidates.push_back(depth_of(z));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto feasible = [&](const Rational& d) {
        if (depth_of(x) > d) return false;
        std::vector<char> seen(land.state_count(), 0);
        std::queue<int> q;
        seen[x] = 1;
        q.push(x);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const auto* e = land.neighbors_begin(u); e != land.neighbors_end(u); ++e) {
                int v = e->target;
                if (ctx.in_a[v] && ctx.in_cplus[v]) return true;
                if (!seen[v] && ctx.in_cplus[v] && !ctx.in_a[v] && !(d < depth_of(v))) {
                    seen[v] = 1;
                    q.push(v);
                }
            }
        }
        return false;
    };

    std::size_t lo = 0, hi = candidates.size() - 1;
    if (candidates.empty() || !feasible(candidates.back()))
        throw computation_error("no optimal path found; landscape connectivity is broken");
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    out.psi_min = candidates[lo];
    return out;
}

// ---------------------------------------------------------------------------
// Typical tube and theta exponents
// ---------------------------------------------------------------------------

namespace {

struct TubeAnalysis {
    QueryContext ctx;
    CyclePartition part;
    std::vector<std::vector<int>> succ;   // cycle digraph, deduplicated
    std::vector<char> exits_to_a;         // principal boundary meets A
    std::vector<std::vector<int>> exit_states_in_a;  // per cycle
    std::vector<char> reached;            // tube membership per cycle
    std::vector<int> reached_ids;
};

// Exit states of a maximal cycle: the principal boundary for a non-trivial
// cycle, every zero-cost (downhill or flat) neighbor for a trivial one.
// Trivial cycles spread their exit over all non-raising moves; using the bare
// boundary minimum there would disconnect the typical-jump digraph from the
// paths the chain actually follows.
std::vector<int> cycle_exit_states(const EnergyLandscape& land, const PartitionCycle& cyc,
                                   const std::vector<char>& inside) {
    std::vector<int> exits;
    if (!cyc.trivial) {
        std::vector<char> seen(land.state_count(), 0);
        for (int s : cyc.members) {
            for (const auto* e = land.neighbors_begin(s); e != land.neighbors_end(s); ++e) {
                int v = e->target;
                if (inside[v] || seen[v]) continue;
                seen[v] = 1;
                if (land.energy(v) == cyc.death_level) exits.push_back(v);
            }
        }
    } else {
        int w = cyc.members[0];
        for (const auto* e = land.neighbors_begin(w); e != land.neighbors_end(w); ++e) {
            int v = e->target;
            if (!(land.energy(w) < land.energy(v))) exits.push_back(v);
        }
    }
    std::sort(exits.begin(), exits.end());
    exits.erase(std::unique(exits.begin(), exits.end()), exits.end());
    if (exits.empty()) throw computation_error("maximal cycle has no exit states");
    return exits;
}

TubeAnalysis build_tube_analysis(const EnergyLandscape& land, int x, std::vector<int> targets) {
    TubeAnalysis t;
    t.ctx = build_query(land, x, std::move(targets));
    const int n = land.state_count();
    std::vector<int> b;
    for (int s = 0; s < n; ++s)
        if (!t.ctx.in_a[s]) b.push_back(s);
    t.part = run_partition(land, [&] {
        std::vector<char> mask(n, 0);
        for (int s : b) mask[s] = 1;
        return mask;
    }());

    const int m = static_cast<int>(t.part.cycles.size());
    t.succ.resize(m);
    t.exits_to_a.assign(m, 0);
    t.exit_states_in_a.resize(m);
    std::vector<char> inside(n, 0);
    for (int c = 0; c < m; ++c) {
        for (int s : t.part.cycles[c].members) inside[s] = 1;
        std::vector<int> exits = cycle_exit_states(land, t.part.cycles[c], inside);
        for (int s : t.part.cycles[c].members) inside[s] = 0;
        for (int y : exits) {
            if (t.ctx.in_a[y]) {
                t.exits_to_a[c] = 1;
                t.exit_states_in_a[c].push_back(y);
            } else {
                t.succ[c].push_back(t.part.cycle_of_state[y]);
            }
        }
        std::sort(t.succ[c].begin(), t.succ[c].end());
        t.succ[c].erase(std::unique(t.succ[c].begin(), t.succ[c].end()), t.succ[c].end());
    }

    // BFS over typical jumps from the initial cycle
    t.reached.assign(m, 0);
    int start = t.part.cycle_of_state[x];
    std::queue<int> q;
    t.reached[start] = 1;
    q.push(start);
    while (!q.empty()) {
        int c = q.front();
        q.pop();
        t.reached_ids.push_back(c);
        for (int d : t.succ[c]) {
            if (!t.reached[d]) {
                t.reached[d] = 1;
                q.push(d);
            }
        }
    }
    std::sort(t.reached_ids.begin(), t.reached_ids.end());
    return t;
}

Cycle partition_cycle_to_cycle(const EnergyLandscape& land, const PartitionCycle& cyc) {
    return make_cycle(land, cyc.members);
}

}  // namespace

TypicalTube typical_tube(const EnergyLandscape& land, int x, std::vector<int> targets) {
    TubeAnalysis t = build_tube_analysis(land, x, std::move(targets));
    TypicalTube tube;
    std::vector<char> exit_seen(land.state_count(), 0);
    for (int c : t.reached_ids) {
        for (int s : t.part.cycles[c].members) tube.states.push_back(s);
        for (int a : t.exit_states_in_a[c]) {
            if (!exit_seen[a]) {
                exit_seen[a] = 1;
                tube.exit_states.push_back(a);
            }
        }
        tube.cycles.push_back(partition_cycle_to_cycle(land, t.part.cycles[c]));
    }
    tube.states.insert(tube.states.end(), tube.exit_states.begin(), tube.exit_states.end());
    std::sort(tube.states.begin(), tube.states.end());
    std::sort(tube.exit_states.begin(), tube.exit_states.end());
    if (tube.exit_states.empty())
        throw computation_error("typical tube reached no target state");
    return tube;
}

ThetaExponents theta_exponents(const EnergyLandscape& land, int x, std::vector<int> targets) {
    TubeAnalysis t = build_tube_analysis(land, x, std::move(targets));
    ThetaExponents out;
    bool any_exit = false;
    for (int c : t.reached_ids) {
        out.theta_max = rational_max(out.theta_max, t.part.cycles[c].depth);
        any_exit = any_exit || t.exits_to_a[c];
    }
    if (!any_exit) throw computation_error("typical-jump digraph does not reach the target set");

    // Theta_min: smallest depth bound d such that some typical cycle-path
    // from the initial cycle reaches an exit cycle using only cycles of
    // depth <= d.
    std::vector<Rational> candidates;
    for (int c : t.reached_ids) candidates.push_back(t.part.cycles[c].depth);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    int start = t.part.cycle_of_state[x];
    auto feasible = [&](const Rational& d) {
        if (d < t.part.cycles[start].depth) return false;
        std::vector<char> seen(t.part.cycles.size(), 0);
        std::queue<int> q;
        seen[start] = 1;
        q.push(start);
        while (!q.empty()) {
            int c = q.front();
            q.pop();
            if (t.exits_to_a[c]) return true;
            for (int nxt : t.succ[c]) {
                if (!seen[nxt] && !(d < t.part.cycles[nxt].depth)) {
                    seen[nxt] = 1;
                    q.push(nxt);
                }
            }
        }
        return false;
    };
    std::size_t lo = 0, hi = candidates.size() - 1;
    if (!feasible(candidates.back()))
        throw computation_error("typical-jump reachability failed at the maximal depth bound");
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    out.theta_min = candidates[lo];
    return out;
}

// ---------------------------------------------------------------------------
// Assumptions A and B
// ---------------------------------------------------------------------------

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds_by_sufficient_condition: return "holds_by_sufficient_condition";
        case Verdict::holds_directly: return "holds_directly";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// max depth reachable from each cycle in the typical-jump digraph;
// Tarjan condensation keeps cyclic jump structures linear.
std::vector<Rational> max_reachable_depth(const TubeAnalysis& t) {
    const int m = static_cast<int>(t.part.cycles.size());
    std::vector<int> comp(m, -1), low(m), num(m, -1), stack_;
    std::vector<char> onstack(m, 0);
    int counter = 0, comp_count = 0;
    std::vector<int> comp_order;  // Tarjan emits sinks first

    // iterative Tarjan
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < m; ++root) {
        if (num[root] >= 0) continue;
        frames.emplace_back(root, 0);
        while (!frames.empty()) {
            auto& [v, it] = frames.back();
            if (it == 0) {
                num[v] = low[v] = counter++;
                stack_.push_back(v);
                onstack[v] = 1;
            }
            if (it < t.succ[v].size()) {
                int w = t.succ[v][it++];
                if (num[w] < 0) {
                    frames.emplace_back(w, 0);
                } else if (onstack[w]) {
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                if (low[v] == num[v]) {
                    while (true) {
                        int w = stack_.back();
                        stack_.pop_back();
                        onstack[w] = 0;
                        comp[w] = comp_count;
                        if (w == v) break;
                    }
                    comp_order.push_back(comp_count);
                    ++comp_count;
                }
                frames.pop_back();
                if (!frames.empty()) {
                    int parent = frames.back().first;
                    low[parent] = std::min(low[parent], low[v]);
                }
            }
        }
    }

    std::vector<Rational> comp_max(comp_count, Rational(0));
    std::vector<char> comp_has(comp_count, 0);
    for (int c = 0; c < m; ++c) {
        int k = comp[c];
        if (!comp_has[k] || comp_max[k] < t.part.cycles[c].depth) comp_max[k] = t.part.cycles[c].depth;
        comp_has[k] = 1;
    }
    // components are numbered in emission order (sinks first), so successors
    // of a component always carry smaller, already-final numbers
    std::vector<std::vector<int>> comp_succ(comp_count);
    for (int c = 0; c < m; ++c)
        for (int d : t.succ[c])
            if (comp[c] != comp[d]) comp_succ[comp[c]].push_back(comp[d]);
    for (int k = 0; k < comp_count; ++k) {  // successors have smaller ids
        for (int d : comp_succ[k])
            if (comp_max[k] < comp_max[d]) comp_max[k] = comp_max[d];
    }

    std::vector<Rational> out(m);
    for (int c = 0; c < m; ++c) out[c] = comp_max[comp[c]];
    return out;
}

}  // namespace

AssumptionReport check_assumption_a(const EnergyLandscape& land, int x, std::vector<int> targets) {
    AssumptionReport rep;
    QueryContext ctx = build_query(land, x, std::move(targets));
    std::vector<int> b;
    for (int s = 0; s < land.state_count(); ++s)
        if (!ctx.in_a[s]) b.push_back(s);
    Rational gamma_tilde = max_depth(land, b);
    Rational ascent = ctx.phi_a - land.energy(x);
    if (ascent == gamma_tilde) {
        rep.verdict = Verdict::holds_by_sufficient_condition;
        rep.lhs = ascent;
        rep.rhs = gamma_tilde;
        rep.detail = "Phi(x,A) - H(x) = " + ascent.str() + " equals the maximum depth of the complement";
        return rep;
    }
    TubeAnalysis t = build_tube_analysis(land, x, ctx.targets);
    ThetaExponents th = theta_exponents(land, x, ctx.targets);
    if (th.theta_min != th.theta_max) {
        rep.verdict = Verdict::fails;
        rep.lhs = th.theta_min;
        rep.rhs = th.theta_max;
        rep.detail = "condition (A1) fails: Theta_min = " + th.theta_min.str() +
                     " < Theta_max = " + th.theta_max.str();
        return rep;
    }
    std::vector<Rational> reach = max_reachable_depth(t);
    for (int z = 0; z < land.state_count(); ++z) {
        if (ctx.in_a[z]) continue;
        Rational theta_z = reach[t.part.cycle_of_state[z]];
        if (th.theta_max < theta_z) {
            rep.verdict = Verdict::fails;
            rep.witness_state = z;
            rep.lhs = theta_z;
            rep.rhs = th.theta_max;
            rep.detail = "condition (A2) fails: Theta_max(z,A) = " + theta_z.str() + " for z=" +
                         std::to_string(z) + " exceeds Theta(x,A) = " + th.theta_max.str();
            return rep;
        }
    }
    rep.verdict = Verdict::holds_directly;
    rep.lhs = th.theta_min;
    rep.rhs = th.theta_max;
    rep.detail = "(A1) and (A2) verified directly with Theta = " + th.theta_max.str();
    return rep;
}

AssumptionReport check_assumption_b(const EnergyLandscape& land, int x, std::vector<int> targets,
                                    std::optional<Rational> theta_star_known) {
    AssumptionReport rep;
    QueryContext ctx = build_query(land, x, std::move(targets));
    Rational gamma_x = initial_cycle_depth(land, x, ctx.targets);
    std::vector<int> b_minus_x;
    for (int s = 0; s < land.state_count(); ++s)
        if (!ctx.in_a[s] && s != x) b_minus_x.push_back(s);
    Rational gamma_tilde = max_depth_allow_empty(land, b_minus_x);
    if (gamma_tilde < gamma_x) {
        rep.verdict = Verdict::holds_by_sufficient_condition;
        rep.lhs = gamma_x;
        rep.rhs = gamma_tilde;
        rep.detail = "Gamma(x,A) = " + gamma_x.str() + " exceeds the deepest cycle elsewhere (" +
                     gamma_tilde.str() + "): the initial cycle is the unique deepest cycle";
        return rep;
    }
    std::optional<Rational> theta_star = theta_star_known;
    std::string theta_src = "externally supplied Theta*";
    if (!theta_star) {
        AssumptionReport a = check_assumption_a(land, x, ctx.targets);
        if (a.verdict == Verdict::holds_by_sufficient_condition || a.verdict == Verdict::holds_directly) {
            theta_star = theta_exponents(land, x, ctx.targets).theta_max;
            theta_src = "Theta(x,A) under Assumption A";
        }
    }
    if (!theta_star) {
        rep.verdict = Verdict::inconclusive;
        rep.detail = "Assumption A fails and the sufficient condition fails; Theta*(x,A) is not "
                     "determined by this analysis";
        return rep;
    }
    rep.lhs = *theta_star;
    rep.rhs = gamma_tilde;
    if (gamma_tilde < *theta_star) {
        rep.verdict = Verdict::holds_directly;
        rep.detail = theta_src + " = " + theta_star->str() + " exceeds max depth without x (" +
                     gamma_tilde.str() + ")";
    } else {
        rep.verdict = Verdict::fails;
        rep.detail = theta_src + " = " + theta_star->str() + " does not exceed max depth without x (" +
                     gamma_tilde.str() + ")";
    }
    return rep;
}

ExponentReport exponent_report(const EnergyLandscape& land, int x, std::vector<int> targets,
                               std::optional<Rational> theta_star_known) {
    ExponentReport rep;
    rep.x = x;
    rep.targets = targets;
    QueryContext ctx = build_query(land, x, std::move(targets));
    rep.completed_targets = ctx.targets;
    rep.phi = ctx.phi_a;
    rep.gamma_init = initial_cycle_depth(land, x, ctx.targets);
    PsiExponents psi = psi_exponents(land, x, ctx.targets);
    ThetaExponents theta = theta_exponents(land, x, ctx.targets);
    rep.psi_min = psi.psi_min;
    rep.psi_max = psi.psi_max;
    rep.theta_min = theta.theta_min;
    rep.theta_max = theta.theta_max;
    std::vector<int> b;
    for (int s = 0; s < land.state_count(); ++s)
        if (!ctx.in_a[s]) b.push_back(s);
    rep.gamma_tilde_complement = max_depth(land, b);
    rep.assumption_a = check_assumption_a(land, x, ctx.targets);
    rep.assumption_b = check_assumption_b(land, x, ctx.targets, theta_star_known);

    bool chain = !(rep.psi_min < rep.gamma_init) && !(rep.theta_min < rep.psi_min) &&
                 !(rep.theta_max < rep.theta_min) && !(rep.psi_max < rep.theta_max) &&
                 !(rep.gamma_tilde_complement < rep.psi_max);
    if (!chain)
        throw computation_error("exponent inequality chain violated; landscape analysis is inconsistent");
    return rep;
}

// ---------------------------------------------------------------------------
// Cycle tree
// ---------------------------------------------------------------------------

CycleTree cycle_tree(const EnergyLandscape& land) {
    const int n = land.state_count();
    CycleTree tree;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (land.energy(a) != land.energy(b)) return land.energy(a) < land.energy(b);
        return a < b;
    });

    UnionFind uf(n);
    std::vector<char> active(n, 0);
    std::vector<int> node_of_root(n, -1);
    std::vector<int> stamp(n, -1);
    std::vector<std::vector<int>> group(n);  // node ids merged under a root this level
    std::vector<int> touched;
    int level_seq = 0;

    auto touch = [&](int r) {
        if (stamp[r] != level_seq) {
            stamp[r] = level_seq;
            group[r].clear();
            if (node_of_root[r] >= 0) group[r].push_back(node_of_root[r]);
            touched.push_back(r);
        }
    };
    auto unite = [&](int a, int b) {
        int ra = uf.find(a), rb = uf.find(b);
        if (ra == rb) return;
        touch(ra);
        touch(rb);
        if (uf.rank_[ra] < uf.rank_[rb]) std::swap(ra, rb);
        if (uf.rank_[ra] == uf.rank_[rb]) ++uf.rank_[ra];
        uf.parent[rb] = ra;
        if (group[ra].size() < group[rb].size()) group[ra].swap(group[rb]);
        group[ra].insert(group[ra].end(), group[rb].begin(), group[rb].end());
    };

    std::size_t i = 0;
    int last_root_node = -1;
    while (i < order.size()) {
        std::size_t j = i;
        Rational h = land.energy(order[i]);
        while (j < order.size() && land.energy(order[j]) == h) ++j;
        ++level_seq;
        touched.clear();

        for (std::size_t k = i; k < j; ++k) {
            int s = order[k];
            uf.parent[s] = s;
            active[s] = 1;
            CycleTreeNode leaf;
            leaf.state = s;
            leaf.bottom = h;
            leaf.top = h;
            leaf.size = 1;
            int id = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(std::move(leaf));
            node_of_root[s] = id;
            touch(s);
        }
        for (std::size_t k = i; k < j; ++k) {
            int s = order[k];
            for (const auto* e = land.neighbors_begin(s); e != land.neighbors_end(s); ++e) {
                if (active[e->target]) unite(s, e->target);
            }
        }
        for (int t : touched) {
            int r = uf.find(t);
            if (stamp[r] != level_seq) continue;
            stamp[r] = -2;
            if (group[r].size() <= 1) {
                last_root_node = group[r].empty() ? node_of_root[r] : group[r][0];
                node_of_root[r] = last_root_node;
                continue;
            }
            CycleTreeNode node;
            node.bottom = h;
            node.top = h;
            node.size = 0;
            int id = static_cast<int>(tree.nodes.size());
            for (int child : group[r]) {
                node.bottom = rational_min(node.bottom, tree.nodes[child].bottom);
                node.size += tree.nodes[child].size;
                node.children.push_back(child);
            }
            tree.nodes.push_back(std::move(node));
            for (int child : tree.nodes[id].children) {
                tree.nodes[child].parent = id;
                tree.nodes[child].depth = h - tree.nodes[child].bottom;
            }
            node_of_root[r] = id;
            last_root_node = id;
        }
        i = j;
    }
    tree.root = last_root_node;
    if (tree.root < 0 || tree.nodes[tree.root].size != n)
        throw computation_error("cycle tree construction did not close over the state space");
    return tree;
}

namespace {

void tree_text_rec(const CycleTree& tree, const EnergyLandscape& land, int node, int indent,
                   std::ostringstream& out) {
    const CycleTreeNode& nd = tree.nodes[node];
    out << std::string(static_cast<std::size_t>(indent) * 2, ' ');
    if (node == tree.root) {
        out << "X";
    } else if (nd.state) {
        out << "state " << *nd.state << " H=" << nd.bottom.str();
    } else {
        out << "cycle";
    }
    if (node != tree.root && !nd.state) {
        out << " size=" << nd.size << " bottom=" << nd.bottom.str() << " top=" << nd.top.str();
    }
    if (nd.depth) out << " depth=" << nd.depth->str();
    out << '\n';
    for (int child : nd.children) tree_text_rec(tree, land, child, indent + 1, out);
}

}  // namespace

std::string CycleTree::to_text(const EnergyLandscape& land) const {
    std::ostringstream out;
    tree_text_rec(*this, land, root, 0, out);
    return out.str();
}

std::string CycleTree::to_dot() const {
    std::ostringstream out;
    out << "digraph cycles {\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out << "  n" << i << " [label=\"";
        if (static_cast<int>(i) == root)
            out << "X";
        else if (nodes[i].state)
            out << "s" << *nodes[i].state;
        else
            out << "C" << i << " d=" << (nodes[i].depth ? nodes[i].depth->str() : "?");
        out << "\"];\n";
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (int child : nodes[i].children) out << "  n" << i << " -> n" << child << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace gridgas
