#pragma once

#include <string>
#include <vector>

#include "gridgas/bitconfig.hpp"
#include "gridgas/graph.hpp"

namespace gridgas {

// Complete K-partite hard-core model: components B_1..B_K, edges between
// every pair of sites in different components. Its independent sets are the
// subsets of single components, which makes every hitting quantity explicit.
struct KPartiteSpec {
    std::vector<int> sizes;  // L_1..L_K

    KPartiteSpec() = default;
    explicit KPartiteSpec(std::vector<int> s) : sizes(std::move(s)) { validate(); }

    void validate() const;
    int component_count() const { return static_cast<int>(sizes.size()); }
    int site_count() const;                       // N
    int component_of_site(int site) const;
    int first_site(int component) const;          // components occupy consecutive sites

    int l_star(int k2) const;                     // L_* = max_{k != k2} L_k
    std::vector<int> k_star(int k2) const;        // components attaining L_*
    double p_value(int k2) const;                 // L_{k2} / (|K_*| L_* + L_{k2})

    std::string label() const;
};

KPartiteSpec parse_kpartite_spec(const std::string& text);  // "2,2,1"

Graph build_kpartite(const KPartiteSpec& spec);

// sigma_k: component k fully occupied. k is 1-based, matching s<k> names.
Configuration sigma_config(const KPartiteSpec& spec, int k);

// 1 + sum_k (2^{L_k} - 1)
std::int64_t kpartite_state_count(const KPartiteSpec& spec);

// N (1_{k1 in K_*}/L_* + |K_*|/L_{k2}) e^{beta L_*}
double predicted_mean(const KPartiteSpec& spec, int k1, int k2, double beta);

// Limit law of tau / E tau: Exp(1) when k1 is in K_*(k2); otherwise the
// geometric sum Z = sum_{i=1}^{M} Y_i with M ~ Geom(p) on {0,1,...}, whose
// CDF is 1 - (1-p) e^{-p t} (an atom of mass p at zero and an Exp(p) tail).
struct LimitLaw {
    bool exponential = true;
    double p = 0;  // meaningful when !exponential

    double cdf(double t) const;
    std::string describe() const;
};

LimitLaw limit_law(const KPartiteSpec& spec, int k1, int k2);

// Gamma(sigma_k1, {sigma_k2}) = L_k1 = Psi_min and Psi_max = L_* =
// max depth of the complement, checked against the landscape analysis.
struct StructuralCheck {
    std::int64_t gamma = 0;
    std::int64_t psi_min = 0;
    std::int64_t psi_max = 0;
    std::int64_t gamma_tilde = 0;
    bool gamma_is_lk1 = false;
    bool psi_min_is_lk1 = false;
    bool psi_max_is_lstar = false;
    bool gamma_tilde_is_lstar = false;
    bool all_pass() const {
        return gamma_is_lk1 && psi_min_is_lk1 && psi_max_is_lstar && gamma_tilde_is_lstar;
    }
};

StructuralCheck structural_check(const KPartiteSpec& spec, int k1, int k2);

}  // namespace gridgas
