// Python bindings over the main operations: enumeration, exact landscape
// reports, hitting-time sampling, exact means, mixing/gap, and the
// K-partite closed forms. Structured results cross the boundary as dicts
// decoded from the same JSON the CLI emits.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridgas/analysis.hpp"
#include "gridgas/enumerate.hpp"
#include "gridgas/exact.hpp"
#include "gridgas/grid.hpp"
#include "gridgas/kpartite.hpp"
#include "gridgas/model.hpp"
#include "gridgas/report.hpp"
#include "gridgas/sim.hpp"

namespace py = pybind11;
using namespace gridgas;

namespace {

Model resolve(const std::string& grid, const std::string& kpartite) {
    return make_model(grid, kpartite);
}

py::object json_to_py(const ordered_json& j) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

struct Bundle {
    Model model;
    StateSpace space;
    EnergyLandscape land;

    Bundle(const std::string& grid, const std::string& kpartite)
        : model(resolve(grid, kpartite)),
          space(enumerate_states(model.graph)),
          land(as_landscape(space)) {}

    int state_of(const std::string& name) {
        int s = space.find_state(named_config(model, name).key64());
        if (s < 0) throw validation_error("configuration is not an admissible state");
        return s;
    }
};

}  // namespace

PYBIND11_MODULE(gridgas, m) {
    m.doc() = "hard-core lattice gas on grid graphs: exact landscape analysis and simulation";

    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<computation_error>(m, "ComputationError", PyExc_RuntimeError);

    m.def(
        "gamma_formula",
        [](const std::string& grid) { return gamma_formula(parse_grid_spec(grid)); },
        py::arg("grid"), "closed-form tunneling barrier of a grid spec like 'toroidal:4x6'");

    m.def(
        "reference_path_height",
        [](const std::string& grid) {
            GridSpec spec = parse_grid_spec(grid);
            return reference_path(spec).height - chessboard(spec, Parity::even).energy();
        },
        py::arg("grid"), "height above H(e) of the constructed e -> o reference path");

    m.def(
        "state_count",
        [](const std::string& grid, const std::string& kpartite) {
            Model model = resolve(grid, kpartite);
            return enumerate_states(model.graph, kDefaultEnumerationCap, 0).state_count();
        },
        py::arg("grid") = "", py::arg("kpartite") = "",
        "number of admissible configurations of the model");

    m.def(
        "landscape_report",
        [](const std::string& from, const std::string& to, const std::string& grid,
           const std::string& kpartite) {
            Bundle b(grid, kpartite);
            std::optional<Rational> theta_star;
            if (b.model.kpartite && from.size() >= 2 && from[0] == 's' && to.size() >= 2 &&
                to[0] == 's')
                theta_star = Rational(b.model.kpartite->l_star(std::stoi(to.substr(1)) - 1));
            ExponentReport rep = exponent_report(b.land, b.state_of(from), {b.state_of(to)},
                                                 theta_star);
            return json_to_py(exponent_report_json(rep, b.space));
        },
        py::arg("from_"), py::arg("to"), py::arg("grid") = "", py::arg("kpartite") = "",
        "exact exponents and assumption verdicts for a hitting query");

    m.def(
        "mean_hitting",
        [](const std::string& from, const std::string& to, double beta, const std::string& grid,
           const std::string& kpartite) {
            Bundle b(grid, kpartite);
            return mean_hitting_exact(b.land, b.state_of(from), {b.state_of(to)}, beta);
        },
        py::arg("from_"), py::arg("to"), py::arg("beta"), py::arg("grid") = "",
        py::arg("kpartite") = "", "exact mean hitting time at fixed beta");

    m.def(
        "simulate_hitting",
        [](const std::string& from, const std::string& to, double beta, int replicas,
           std::uint64_t seed, bool rejection_free, std::uint64_t max_steps,
           const std::string& grid, const std::string& kpartite) {
            Model model = resolve(grid, kpartite);
            SimConfig sim;
            sim.beta = beta;
            sim.replicas = replicas;
            sim.seed = seed;
            sim.rejection_free = rejection_free;
            sim.max_steps = max_steps;
            std::vector<HittingSample> samples = sample_hitting(
                model.graph, named_config(model, from), {named_config(model, to)}, sim);
            std::vector<std::pair<std::uint64_t, bool>> out;
            out.reserve(samples.size());
            for (const auto& s : samples) out.emplace_back(s.steps, s.capped);
            return out;
        },
        py::arg("from_"), py::arg("to"), py::arg("beta"), py::arg("replicas") = 1000,
        py::arg("seed") = 0, py::arg("rejection_free") = false,
        py::arg("max_steps") = std::uint64_t{1} << 50, py::arg("grid") = "",
        py::arg("kpartite") = "", "per-replica (steps, capped) hitting samples");

    m.def(
        "mixing_time",
        [](double beta, double eps, const std::string& grid, const std::string& kpartite) {
            Bundle b(grid, kpartite);
            MixingResult r = tv_mixing_time(b.land, beta, eps);
            return py::make_tuple(r.steps, r.capped);
        },
        py::arg("beta"), py::arg("eps") = 0.25, py::arg("grid") = "", py::arg("kpartite") = "",
        "total-variation mixing time (steps, capped)");

    m.def(
        "spectral_gap",
        [](double beta, const std::string& grid, const std::string& kpartite) {
            Bundle b(grid, kpartite);
            return spectral_gap(b.land, beta);
        },
        py::arg("beta"), py::arg("grid") = "", py::arg("kpartite") = "");

    m.def(
        "ks_exp1",
        [](std::vector<double> scaled, double alpha) {
            KsResult r = ks_exp1(std::move(scaled), alpha);
            py::dict d;
            d["statistic"] = r.statistic;
            d["critical"] = r.critical;
            d["n"] = r.n;
            d["alpha"] = r.alpha;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("scaled_samples"), py::arg("alpha") = 0.01,
        "KS test of mean-scaled samples against Exp(1)");

    m.def(
        "kpartite_predicted_mean",
        [](const std::string& sizes, int k1, int k2, double beta) {
            return predicted_mean(parse_kpartite_spec(sizes), k1, k2, beta);
        },
        py::arg("sizes"), py::arg("k1"), py::arg("k2"), py::arg("beta"));

    m.def(
        "kpartite_limit_law",
        [](const std::string& sizes, int k1, int k2) {
            LimitLaw law = limit_law(parse_kpartite_spec(sizes), k1, k2);
            py::dict d;
            d["exponential"] = law.exponential;
            d["p"] = law.p;
            d["description"] = law.describe();
            return d;
        },
        py::arg("sizes"), py::arg("k1"), py::arg("k2"));

    m.def(
        "to_ascii",
        [](const std::string& name, const std::string& grid) {
            Model model = resolve(grid, "");
            return to_ascii(named_config(model, name), *model.grid);
        },
        py::arg("config"), py::arg("grid"));
}
