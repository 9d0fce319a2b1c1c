#include "gridgas/landscape.hpp"

#include <algorithm>
#include <queue>

namespace gridgas {

EnergyLandscape::EnergyLandscape(std::vector<Rational> energies,
                                 const std::vector<std::pair<int, int>>& edges,
                                 double uniform_weight)
    : n_(static_cast<int>(energies.size())), energy_(std::move(energies)) {
    if (n_ == 0) throw validation_error("landscape needs at least one state");
    double w = uniform_weight > 0 ? uniform_weight : 1.0 / static_cast<double>(n_);
    std::vector<int> deg(n_, 0);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v)
            throw validation_error("landscape edge out of range or self-loop");
        ++deg[u];
        ++deg[v];
    }
    offsets_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    edges_.resize(offsets_[n_]);
    std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges) {
        edges_[cursor[u]++] = Edge{static_cast<std::int32_t>(v), w};
        edges_[cursor[v]++] = Edge{static_cast<std::int32_t>(u), w};
    }
    for (int x = 0; x < n_; ++x) {
        std::sort(edges_.data() + offsets_[x], edges_.data() + offsets_[x + 1],
                  [](const Edge& a, const Edge& b) { return a.target < b.target; });
    }
    validate();
}

double EnergyLandscape::self_loop(int x) const {
    double total = 0;
    for (const Edge* e = neighbors_begin(x); e != neighbors_end(x); ++e) total += e->q;
    return 1.0 - total;
}

void EnergyLandscape::validate() const {
    // connectivity
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (const Edge* e = neighbors_begin(u); e != neighbors_end(u); ++e) {
            if (!seen[e->target]) {
                seen[e->target] = 1;
                ++reached;
                q.push(e->target);
            }
        }
    }
    if (reached != n_) throw validation_error("landscape connectivity is not irreducible");
    bool constant = true;
    for (int x = 1; x < n_ && constant; ++x) constant = energy_[x] == energy_[0];
    if (constant && n_ > 1) throw validation_error("landscape energy function is constant");
    for (int x = 0; x < n_; ++x) {
        if (self_loop(x) < -1e-12)
            throw validation_error("landscape connectivity row sum exceeds 1");
    }
}

EnergyLandscape make_landscape(const std::vector<std::int64_t>& energies,
                               const std::vector<std::pair<int, int>>& edges,
                               double uniform_weight) {
    std::vector<Rational> e(energies.begin(), energies.end());
    return EnergyLandscape(std::move(e), edges, uniform_weight);
}

}  // namespace gridgas
