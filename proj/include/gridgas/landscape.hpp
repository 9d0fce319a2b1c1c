#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gridgas/errors.hpp"
#include "gridgas/rational.hpp"

namespace gridgas {

// Finite energy landscape (X, H, q): states 0..n-1, exact energies, and a
// symmetric connectivity with positive weight q(x,y) on each stored edge.
// The diagonal residual 1 - sum_y q(x,y) is implicit.
class EnergyLandscape {
public:
    EnergyLandscape() = default;

    // edges are undirected pairs; weight defaults to 1/n per directed edge.
    EnergyLandscape(std::vector<Rational> energies,
                    const std::vector<std::pair<int, int>>& edges,
                    double uniform_weight = -1.0);

    int state_count() const { return n_; }
    const Rational& energy(int x) const { return energy_[x]; }
    const std::vector<Rational>& energies() const { return energy_; }

    struct Edge {
        std::int32_t target;
        double q;
    };

    const Edge* neighbors_begin(int x) const { return edges_.data() + offsets_[x]; }
    const Edge* neighbors_end(int x) const { return edges_.data() + offsets_[x + 1]; }
    int degree(int x) const { return static_cast<int>(offsets_[x + 1] - offsets_[x]); }

    double self_loop(int x) const;

    // Irreducible connectivity and a non-constant energy function.
    void validate() const;

private:
    int n_ = 0;
    std::vector<Rational> energy_;
    std::vector<std::int64_t> offsets_;
    std::vector<Edge> edges_;
};

// Convenience constructor from integer energies.
EnergyLandscape make_landscape(const std::vector<std::int64_t>& energies,
                               const std::vector<std::pair<int, int>>& edges,
                               double uniform_weight = -1.0);

}  // namespace gridgas
