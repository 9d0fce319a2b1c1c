#include "gridgas/kpartite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gridgas/analysis.hpp"
#include "gridgas/enumerate.hpp"
#include "gridgas/errors.hpp"

namespace gridgas {

void KPartiteSpec::validate() const {
    if (sizes.size() < 2) throw validation_error("K-partite spec needs at least two components");
    for (int s : sizes)
        if (s <= 0) throw validation_error("K-partite component sizes must be positive");
}

int KPartiteSpec::site_count() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int KPartiteSpec::first_site(int component) const {
    int off = 0;
    for (int k = 0; k < component; ++k) off += sizes[k];
    return off;
}

int KPartiteSpec::component_of_site(int site) const {
    int off = 0;
    for (int k = 0; k < component_count(); ++k) {
        off += sizes[k];
        if (site < off) return k;
    }
    throw validation_error("site out of range");
}

int KPartiteSpec::l_star(int k2) const {
    int best = 0;
    for (int k = 0; k < component_count(); ++k)
        if (k != k2) best = std::max(best, sizes[k]);
    return best;
}

std::vector<int> KPartiteSpec::k_star(int k2) const {
    int star = l_star(k2);
    std::vector<int> out;
    for (int k = 0; k < component_count(); ++k)
        if (k != k2 && sizes[k] == star) out.push_back(k);
    return out;
}

double KPartiteSpec::p_value(int k2) const {
    double lk2 = sizes[k2];
    return lk2 / (static_cast<double>(k_star(k2).size()) * l_star(k2) + lk2);
}

std::string KPartiteSpec::label() const {
    std::ostringstream out;
    out << "K-partite(";
    for (std::size_t i = 0; i < sizes.size(); ++i) out << (i ? "," : "") << sizes[i];
    out << ")";
    return out.str();
}

KPartiteSpec parse_kpartite_spec(const std::string& text) {
    std::vector<int> sizes;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            sizes.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw validation_error("bad K-partite size '" + item + "'");
        }
    }
    return KPartiteSpec(std::move(sizes));
}

Graph build_kpartite(const KPartiteSpec& spec) {
    spec.validate();
    const int n = spec.site_count();
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (spec.component_of_site(u) != spec.component_of_site(v)) g.add_edge(u, v);
    return g;
}

Configuration sigma_config(const KPartiteSpec& spec, int k) {
    if (k < 1 || k > spec.component_count())
        throw validation_error("component index k out of range (1-based)");
    Configuration c(spec.site_count());
    int off = spec.first_site(k - 1);
    for (int i = 0; i < spec.sizes[k - 1]; ++i) c.set(off + i, true);
    return c;
}

std::int64_t kpartite_state_count(const KPartiteSpec& spec) {
    std::int64_t total = 1;
    for (int s : spec.sizes) total += (std::int64_t{1} << s) - 1;
    return total;
}

double predicted_mean(const KPartiteSpec& spec, int k1, int k2, double beta) {
    if (k1 == k2) throw validation_error("k1 and k2 must differ");
    int k1i = k1 - 1, k2i = k2 - 1;
    int star = spec.l_star(k2i);
    auto ks = spec.k_star(k2i);
    bool k1_in_star = std::find(ks.begin(), ks.end(), k1i) != ks.end();
    double prefactor = spec.site_count() *
                       ((k1_in_star ? 1.0 / star : 0.0) +
                        static_cast<double>(ks.size()) / spec.sizes[k2i]);
    return prefactor * std::exp(beta * star);
}

double LimitLaw::cdf(double t) const {
    if (t < 0) return 0;
    if (exponential) return 1.0 - std::exp(-t);
    return 1.0 - (1.0 - p) * std::exp(-p * t);
}

std::string LimitLaw::describe() const {
    if (exponential) return "Exp(1)";
    std::ostringstream out;
    out << "geometric-sum(p=" << p << ")";
    return out.str();
}

LimitLaw limit_law(const KPartiteSpec& spec, int k1, int k2) {
    if (k1 == k2) throw validation_error("k1 and k2 must differ");
    int k1i = k1 - 1, k2i = k2 - 1;
    auto ks = spec.k_star(k2i);
    LimitLaw law;
    law.exponential = std::find(ks.begin(), ks.end(), k1i) != ks.end();
    if (!law.exponential) law.p = spec.p_value(k2i);
    return law;
}

StructuralCheck structural_check(const KPartiteSpec& spec, int k1, int k2) {
    if (k1 == k2) throw validation_error("k1 and k2 must differ");
    Graph g = build_kpartite(spec);
    StateSpace space = enumerate_states(g);
    EnergyLandscape land = as_landscape(space);
    int x = space.find_state(sigma_config(spec, k1).key64());
    int a = space.find_state(sigma_config(spec, k2).key64());
    if (x < 0 || a < 0) throw computation_error("sigma configurations missing from the state space");

    StructuralCheck chk;
    chk.gamma = initial_cycle_depth(land, x, {a}).num();
    PsiExponents psi = psi_exponents(land, x, {a});
    chk.psi_min = psi.psi_min.num();
    chk.psi_max = psi.psi_max.num();
    std::vector<int> b;
    for (int s = 0; s < land.state_count(); ++s)
        if (s != a) b.push_back(s);
    chk.gamma_tilde = max_depth(land, b).num();

    int lk1 = spec.sizes[k1 - 1];
    int star = spec.l_star(k2 - 1);
    chk.gamma_is_lk1 = chk.gamma == lk1;
    chk.psi_min_is_lk1 = chk.psi_min == lk1;
    chk.psi_max_is_lstar = chk.psi_max == star;
    chk.gamma_tilde_is_lstar = chk.gamma_tilde == star;
    return chk;
}

}  // namespace gridgas
