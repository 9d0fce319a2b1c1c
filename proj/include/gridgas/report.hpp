#pragma once

// JSON views of analysis results. Header-only; used by the CLI and the
// python bindings. All reports carry `schema: 1`.

#include <string>

#include "json.hpp"

#include "gridgas/analysis.hpp"
#include "gridgas/enumerate.hpp"

namespace gridgas {

using ordered_json = nlohmann::ordered_json;

inline ordered_json rational_json(const Rational& r) {
    if (r.is_integer()) return ordered_json(r.num());
    ordered_json j;
    j["num"] = r.num();
    j["den"] = r.den();
    j["value"] = r.to_double();
    return j;
}

inline ordered_json assumption_json(const AssumptionReport& rep) {
    ordered_json j;
    j["verdict"] = verdict_name(rep.verdict);
    j["detail"] = rep.detail;
    if (rep.witness_state) j["witness_state"] = *rep.witness_state;
    if (rep.lhs) j["lhs"] = rational_json(*rep.lhs);
    if (rep.rhs) j["rhs"] = rational_json(*rep.rhs);
    return j;
}

inline ordered_json exponent_report_json(const ExponentReport& rep, const StateSpace& space) {
    auto hex = [&](int s) { return space.configuration(s).to_hex(); };
    ordered_json j;
    j["from"] = hex(rep.x);
    ordered_json targets = ordered_json::array();
    for (int t : rep.targets) targets.push_back(hex(t));
    j["targets"] = targets;
    ordered_json added = ordered_json::array();
    for (int t : rep.completed_targets) {
        if (std::find(rep.targets.begin(), rep.targets.end(), t) == rep.targets.end())
            added.push_back(hex(t));
    }
    j["completion_added"] = added;
    j["phi"] = rational_json(rep.phi);
    j["gamma"] = rational_json(rep.gamma_init);
    j["psi_min"] = rational_json(rep.psi_min);
    j["psi_max"] = rational_json(rep.psi_max);
    j["theta_min"] = rational_json(rep.theta_min);
    j["theta_max"] = rational_json(rep.theta_max);
    j["gamma_tilde_complement"] = rational_json(rep.gamma_tilde_complement);
    j["assumption_a"] = assumption_json(rep.assumption_a);
    j["assumption_b"] = assumption_json(rep.assumption_b);
    return j;
}

}  // namespace gridgas
