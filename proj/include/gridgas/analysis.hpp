#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridgas/landscape.hpp"

namespace gridgas {

// ---------------------------------------------------------------------------
// Communication heights
// ---------------------------------------------------------------------------

// Phi(sources, x) for every state x: minimum over paths of the maximum energy
// along the path, by best-first search on the max-so-far objective. Ties are
// broken by state index, so witnesses are deterministic.
std::vector<Rational> bottleneck_from(const EnergyLandscape& land, const std::vector<int>& sources);

Rational communication_height(const EnergyLandscape& land, int x, int y);
Rational communication_height(const EnergyLandscape& land, int x, const std::vector<int>& targets);

// Target-set completion: adds every state that cannot be reached from x
// without passing through A. Returns the sorted completed set.
std::vector<int> complete_targets(const EnergyLandscape& land, int x, std::vector<int> targets);

// ---------------------------------------------------------------------------
// Stability levels
// ---------------------------------------------------------------------------

struct StabilityLevel {
    bool stable = false;     // V_x = infinity
    Rational level{0};       // defined when !stable
};

StabilityLevel stability_level(const EnergyLandscape& land, int x);
std::vector<int> stable_states(const EnergyLandscape& land);
std::vector<int> metastable_states(const EnergyLandscape& land);

// ---------------------------------------------------------------------------
// Cycles
// ---------------------------------------------------------------------------

struct Cycle {
    std::vector<int> members;             // sorted
    Rational depth{0};
    std::vector<int> bottom;              // F(C)
    std::vector<int> principal_boundary;  // F(dC); empty iff C has no exterior
    bool trivial = false;
    bool whole_space = false;
};

Cycle initial_cycle(const EnergyLandscape& land, int x, std::vector<int> targets);

// Depth of the initial cycle C_A(x).
Rational initial_cycle_depth(const EnergyLandscape& land, int x, std::vector<int> targets);

struct RelevantCycle {
    Cycle cycle;
    Rational phi;                    // Phi(x, A)
    std::optional<Rational> delta0;  // gap to the cheapest non-optimal path
};

RelevantCycle relevant_cycle(const EnergyLandscape& land, int x, std::vector<int> targets);

// Partition of B into maximal cycles, grown level-by-level with union-find
// over the energy filtration restricted to B.
struct PartitionCycle {
    std::vector<int> members;  // sorted
    Rational bottom_energy{0};
    Rational death_level{0};   // Phi(member, X \ B)
    Rational depth{0};
    bool trivial = false;
};

struct CyclePartition {
    std::vector<PartitionCycle> cycles;
    std::vector<int> cycle_of_state;      // -1 outside B
    std::vector<Rational> exit_height;    // Phi(x, X\B) for x in B; H(x) otherwise
};

CyclePartition maximal_cycle_partition(const EnergyLandscape& land, const std::vector<int>& subset);

// Maximum depth of a cycle inside B; evaluates both the partition formula and
// the max-min communication characterization and insists they agree.
Rational max_depth(const EnergyLandscape& land, const std::vector<int>& subset);

// ---------------------------------------------------------------------------
// Optimal and typical path structure
// ---------------------------------------------------------------------------

std::vector<int> optimal_states(const EnergyLandscape& land, int x, std::vector<int> targets);

struct PsiExponents {
    Rational psi_min{0};
    Rational psi_max{0};
};
PsiExponents psi_exponents(const EnergyLandscape& land, int x, std::vector<int> targets);

struct TypicalTube {
    std::vector<int> states;       // T_A(x), including the A states it reaches
    std::vector<int> exit_states;  // T_A(x) ∩ A
    std::vector<Cycle> cycles;     // the tube's maximal cycles
};
TypicalTube typical_tube(const EnergyLandscape& land, int x, std::vector<int> targets);

struct ThetaExponents {
    Rational theta_min{0};
    Rational theta_max{0};
};
ThetaExponents theta_exponents(const EnergyLandscape& land, int x, std::vector<int> targets);

// ---------------------------------------------------------------------------
// Assumptions A and B
// ---------------------------------------------------------------------------

enum class Verdict { holds_by_sufficient_condition, holds_directly, fails, inconclusive };

std::string verdict_name(Verdict v);

struct AssumptionReport {
    Verdict verdict = Verdict::inconclusive;
    std::string detail;                 // human-readable witness description
    std::optional<int> witness_state;   // violating z, when one exists
    std::optional<Rational> lhs, rhs;   // the decisive comparison
};

AssumptionReport check_assumption_a(const EnergyLandscape& land, int x, std::vector<int> targets);

// theta_star_known lets a model with externally derived mean asymptotics
// (e.g. the complete K-partite landscape) force a definite verdict where the
// generic analysis would stay inconclusive.
AssumptionReport check_assumption_b(const EnergyLandscape& land, int x, std::vector<int> targets,
                                    std::optional<Rational> theta_star_known = std::nullopt);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ExponentReport {
    int x = 0;
    std::vector<int> targets;            // as given
    std::vector<int> completed_targets;  // after unreachability completion
    Rational phi{0};                     // Phi(x, A)
    Rational gamma_init{0};              // Gamma(x, A)
    Rational psi_min{0}, psi_max{0};
    Rational theta_min{0}, theta_max{0};
    Rational gamma_tilde_complement{0};  // max depth of X \ A
    AssumptionReport assumption_a;
    AssumptionReport assumption_b;
};

ExponentReport exponent_report(const EnergyLandscape& land, int x, std::vector<int> targets,
                               std::optional<Rational> theta_star_known = std::nullopt);

// ---------------------------------------------------------------------------
// Cycle tree
// ---------------------------------------------------------------------------

struct CycleTreeNode {
    int parent = -1;
    std::vector<int> children;
    std::optional<int> state;       // set on leaves
    Rational bottom{0};             // H(F(C))
    Rational top{0};                // max energy inside
    std::optional<Rational> depth;  // unset on the root
    int size = 1;
};

struct CycleTree {
    std::vector<CycleTreeNode> nodes;
    int root = -1;

    std::string to_text(const EnergyLandscape& land) const;
    std::string to_dot() const;
};

CycleTree cycle_tree(const EnergyLandscape& land);

}  // namespace gridgas
