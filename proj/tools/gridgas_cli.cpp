// gridgas: hard-core lattice gas dynamics on grid graphs.
//
// Subcommands: enumerate, landscape, verify, simulate, exponent, mixing,
// cycletree. Reports are JSON with a top-level `schema: 1`; identical inputs
// and seeds reproduce byte-identical output apart from the timestamp field.
//
// Exit codes: 0 success, 2 invalid input, 3 computation failure,
// 4 verification found a failing clause.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridgas/analysis.hpp"
#include "gridgas/enumerate.hpp"
#include "gridgas/exact.hpp"
#include "gridgas/grid.hpp"
#include "gridgas/kpartite.hpp"
#include "gridgas/model.hpp"
#include "gridgas/report.hpp"
#include "gridgas/sim.hpp"

using namespace gridgas;
using gridgas::ordered_json;

namespace {

std::string timestamp_utc() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
    return buf;
}

ordered_json model_json(const Model& model) {
    ordered_json j;
    if (model.grid) {
        j["kind"] = "grid";
        j["boundary"] = boundary_name(model.grid->boundary);
        j["rows"] = model.grid->rows;
        j["cols"] = model.grid->cols;
    } else {
        j["kind"] = "kpartite";
        j["sizes"] = model.kpartite->sizes;
    }
    j["label"] = model.label;
    j["sites"] = model.sites();
    return j;
}

ordered_json report_header(const std::string& command, const Model& model) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["timestamp"] = timestamp_utc();
    j["model"] = model_json(model);
    return j;
}

void emit(const ordered_json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw validation_error("cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
}

std::vector<double> parse_betas(const std::string& arg) {
    std::vector<double> betas;
    auto dots = arg.find("..");
    if (dots != std::string::npos) {
        double lo = std::stod(arg.substr(0, dots));
        double hi = std::stod(arg.substr(dots + 2));
        for (double b = lo; b <= hi + 1e-9; b += 1.0) betas.push_back(b);
    } else {
        std::istringstream in(arg);
        std::string item;
        while (std::getline(in, item, ',')) betas.push_back(std::stod(item));
    }
    if (betas.empty()) throw validation_error("empty beta list");
    for (double b : betas)
        if (b <= 0) throw validation_error("beta values must be positive");
    return betas;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed, ordered_json& report) {
    std::uint64_t s;
    if (seed) {
        s = *seed;
        report["seed"] = s;
    } else {
        s = std::random_device{}();
        report["seed"] = s;
        report["seed_generated"] = true;
    }
    return s;
}

struct LandscapeBundle {
    StateSpace space;
    EnergyLandscape land;

    explicit LandscapeBundle(const Model& model)
        : space(enumerate_states(model.graph)), land(as_landscape(space)) {}

    int state_of(const Configuration& c) {
        int s = space.find_state(c.key64());
        if (s < 0) throw validation_error("configuration is not an admissible state");
        return s;
    }
};

// ---------------------------------------------------------------------------

int cmd_enumerate(const Model& model, int cap, const std::string& json_path,
                  const std::string& out_path) {
    Graph graph = model.graph;
    StateSpace space = enumerate_states(graph, cap);
    ordered_json j = report_header("enumerate", model);
    j["states"] = space.state_count();
    std::map<int, int> histogram;
    for (int s = 0; s < space.state_count(); ++s) histogram[space.energy(s)] += 1;
    ordered_json hist = ordered_json::array();
    for (auto [energy, count] : histogram) {
        ordered_json row;
        row["energy"] = energy;
        row["count"] = count;
        hist.push_back(row);
    }
    j["counts_by_energy"] = hist;
    j["ground_energy"] = histogram.begin()->first;
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw validation_error("cannot write " + json_path);
        out << state_space_to_json(space) << "\n";
        j["state_space_file"] = json_path;
    }
    emit(j, out_path);
    return 0;
}

int cmd_landscape(const Model& model, const std::string& from, const std::string& to,
                  const std::string& out_path) {
    LandscapeBundle bundle(model);
    int x = bundle.state_of(named_config(model, from));
    int a = bundle.state_of(named_config(model, to));

    std::optional<Rational> theta_star;
    ordered_json j = report_header("landscape", model);
    if (model.kpartite && from.size() >= 2 && from[0] == 's' && to.size() >= 2 && to[0] == 's') {
        int k2 = std::stoi(to.substr(1));
        theta_star = Rational(model.kpartite->l_star(k2 - 1));
        j["theta_star_source"] = "K-partite mean asymptotics";
    }
    ExponentReport rep = exponent_report(bundle.land, x, {a}, theta_star);
    j["report"] = exponent_report_json(rep, bundle.space);
    j["from_name"] = from;
    j["to_name"] = to;
    emit(j, out_path);
    return 0;
}

int cmd_verify(const Model& model, const std::string& out_path) {
    if (!model.grid) throw validation_error("verify needs a grid model");
    const GridSpec& spec = *model.grid;
    int gamma = gamma_formula(spec);
    int bound = gamma - 1;  // clause (a) right-hand side
    bool odd_open = spec.boundary == Boundary::open && (spec.rows * spec.cols) % 2 == 1;

    StateSpace space = enumerate_states(build_grid(spec).graph, kDefaultEnumerationCap, 0);
    Configuration e_cfg = chessboard(spec, Parity::even);
    Configuration o_cfg = chessboard(spec, Parity::odd);
    int e = space.find_state(e_cfg.key64());
    int o = space.find_state(o_cfg.key64());

    std::vector<int> phi_from_o = bottleneck_heights(space, {o});
    std::vector<int> phi_from_both = bottleneck_heights(space, {e, o});
    std::vector<int> phi_from_e = bottleneck_heights(space, {e});

    int phi_eo = phi_from_o[e];
    int gamma_eo = phi_eo - space.energy(e);
    int gt_not_eo = 0, gt_not_o = 0, gt_not_e = 0;
    for (int s = 0; s < space.state_count(); ++s) {
        if (s != e && s != o) gt_not_eo = std::max(gt_not_eo, phi_from_both[s] - space.energy(s));
        if (s != o) gt_not_o = std::max(gt_not_o, phi_from_o[s] - space.energy(s));
        if (s != e) gt_not_e = std::max(gt_not_e, phi_from_e[s] - space.energy(s));
    }

    ordered_json clauses = ordered_json::array();
    auto clause = [&](const std::string& name, const std::string& desc, std::int64_t lhs,
                      const std::string& rel, std::int64_t rhs, bool pass) {
        ordered_json c;
        c["clause"] = name;
        c["description"] = desc;
        c["lhs"] = lhs;
        c["relation"] = rel;
        c["rhs"] = rhs;
        c["pass"] = pass;
        clauses.push_back(c);
    };

    if (!odd_open) {
        clause("(a)", "max depth avoiding {e,o} is at most the barrier minus one", gt_not_eo, "<=",
               bound, gt_not_eo <= bound);
        clause("(b) barrier", "Gamma(e,{o}) equals the closed form", gamma_eo, "==", gamma,
               gamma_eo == gamma);
        clause("(b) depth", "max depth avoiding {o} equals the closed form", gt_not_o, "==", gamma,
               gt_not_o == gamma);
    } else {
        clause("(a*)", "max depth avoiding {e,o} is strictly below the half-side minimum", gt_not_eo,
               "<", bound, gt_not_eo < bound);
        clause("(b*) barrier", "Gamma(e,{o}) equals the closed form", gamma_eo, "==", gamma,
               gamma_eo == gamma);
        clause("(b*) depth", "max depth avoiding {o} equals the closed form", gt_not_o, "==", gamma,
               gt_not_o == gamma);
        int gamma_oe = phi_eo - space.energy(o);  // Phi symmetric
        clause("(b*) reverse barrier", "Gamma(o,{e}) equals the closed form minus one", gamma_oe,
               "==", gamma - 1, gamma_oe == gamma - 1);
        clause("(b*) reverse depth", "max depth avoiding {e} equals the closed form minus one",
               gt_not_e, "==", gamma - 1, gt_not_e == gamma - 1);
    }

    bool all_pass = true;
    for (const auto& c : clauses) all_pass = all_pass && c["pass"].get<bool>();
    ordered_json j = report_header("verify", model);
    j["gamma_formula"] = gamma;
    j["clauses"] = clauses;
    j["all_pass"] = all_pass;
    emit(j, out_path);
    return all_pass ? 0 : 4;
}

int cmd_simulate(const Model& model, const std::string& from, const std::string& to, double beta,
                 int replicas, std::optional<std::uint64_t> seed, std::uint64_t max_steps,
                 bool rejection_free, bool run_ks, double alpha, const std::string& csv_path,
                 const std::string& out_path) {
    Configuration start = named_config(model, from);
    Configuration target = named_config(model, to);
    ordered_json j = report_header("simulate", model);
    SimConfig sim;
    sim.beta = beta;
    sim.seed = resolve_seed(seed, j);
    sim.replicas = replicas;
    sim.max_steps = max_steps;
    sim.rejection_free = rejection_free;
    std::vector<HittingSample> samples = sample_hitting(model.graph, start, {target}, sim);

    int capped = 0;
    double mean = 0;
    for (const auto& s : samples) {
        capped += s.capped;
        if (!s.capped) mean += static_cast<double>(s.steps);
    }
    int usable = replicas - capped;
    mean /= usable;
    double var = 0;
    for (const auto& s : samples)
        if (!s.capped) var += (static_cast<double>(s.steps) - mean) * (static_cast<double>(s.steps) - mean);
    var /= std::max(1, usable - 1);

    j["beta"] = beta;
    j["replicas"] = replicas;
    j["rejection_free"] = rejection_free;
    j["capped"] = capped;
    if (capped > 0) j["mean_biased_by_cap"] = true;
    j["mean_steps"] = mean;
    j["variance_steps"] = var;
    j["stddev_steps"] = std::sqrt(var);

    if (run_ks) {
        std::vector<double> scaled;
        for (const auto& s : samples)
            if (!s.capped) scaled.push_back(static_cast<double>(s.steps) / mean);
        KsResult ks = ks_exp1(scaled, alpha);
        ordered_json kj;
        kj["statistic"] = ks.statistic;
        kj["critical"] = ks.critical;
        kj["alpha"] = ks.alpha;
        kj["n"] = ks.n;
        kj["pass"] = ks.pass;
        j["ks_exp1"] = kj;
        if (model.kpartite && from.size() >= 2 && from[0] == 's' && to.size() >= 2 && to[0] == 's') {
            LimitLaw law = limit_law(*model.kpartite, std::stoi(from.substr(1)), std::stoi(to.substr(1)));
            j["limit_law"] = law.describe();
            if (!law.exponential) {
                j["distance_to_limit_law"] =
                    ks_distance_above(scaled, [&](double t) { return law.cdf(t); }, 0.05);
                j["distance_cutoff"] = 0.05;
            }
        }
    }
    if (model.kpartite && from.size() >= 2 && from[0] == 's' && to.size() >= 2 && to[0] == 's') {
        j["predicted_mean"] =
            predicted_mean(*model.kpartite, std::stoi(from.substr(1)), std::stoi(to.substr(1)), beta);
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw validation_error("cannot write " + csv_path);
        out << hitting_samples_csv(samples);
        j["csv_file"] = csv_path;
    }
    emit(j, out_path);
    return 0;
}

int cmd_exponent(const Model& model, const std::string& from, const std::string& to,
                 const std::string& betas_arg, bool exact, int replicas,
                 std::optional<std::uint64_t> seed, std::uint64_t max_steps, bool rejection_free,
                 const std::string& csv_path, const std::string& out_path) {
    std::vector<double> betas = parse_betas(betas_arg);
    ordered_json j = report_header("exponent", model);
    Configuration start_cfg = named_config(model, from);
    Configuration target_cfg = named_config(model, to);

    std::vector<std::pair<double, double>> pts;
    ordered_json rows = ordered_json::array();
    if (exact) {
        LandscapeBundle bundle(model);
        int x = bundle.state_of(start_cfg);
        int a = bundle.state_of(target_cfg);
        for (double beta : betas) {
            double mean = mean_hitting_exact(bundle.land, x, {a}, beta);
            pts.emplace_back(beta, mean);
            ordered_json row;
            row["beta"] = beta;
            row["mean"] = mean;
            row["log_mean"] = std::log(mean);
            rows.push_back(row);
        }
        j["method"] = "exact";
    } else {
        std::uint64_t s = resolve_seed(seed, j);
        for (double beta : betas) {
            SimConfig sim;
            sim.beta = beta;
            sim.seed = s;
            sim.replicas = replicas;
            sim.max_steps = max_steps;
            sim.rejection_free = rejection_free;
            std::vector<HittingSample> samples = sample_hitting(model.graph, start_cfg, {target_cfg}, sim);
            double mean = 0;
            int usable = 0;
            for (const auto& smp : samples) {
                if (!smp.capped) {
                    mean += static_cast<double>(smp.steps);
                    ++usable;
                }
            }
            if (usable == 0) throw computation_error("all replicas capped at beta " + std::to_string(beta));
            mean /= usable;
            pts.emplace_back(beta, mean);
            ordered_json row;
            row["beta"] = beta;
            row["mean"] = mean;
            row["log_mean"] = std::log(mean);
            row["capped"] = replicas - usable;
            rows.push_back(row);
        }
        j["method"] = "monte-carlo";
        j["replicas"] = replicas;
    }
    SlopeFit fit = estimate_exponent(pts);
    j["table"] = rows;
    j["slope"] = fit.slope;
    j["slope_stderr"] = fit.stderr_slope;
    j["intercept"] = fit.intercept;
    if (model.grid) j["gamma_formula"] = gamma_formula(*model.grid);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw validation_error("cannot write " + csv_path);
        out << "beta,mean,log_mean\n";
        for (const auto& [b, m] : pts) out << b << ',' << m << ',' << std::log(m) << '\n';
        j["csv_file"] = csv_path;
    }
    emit(j, out_path);
    return 0;
}

int cmd_mixing(const Model& model, const std::string& betas_arg, double eps, std::uint64_t cap,
               const std::string& csv_path, const std::string& matrix_prefix,
               const std::string& out_path) {
    std::vector<double> betas = parse_betas(betas_arg);
    LandscapeBundle bundle(model);
    ordered_json j = report_header("mixing", model);
    j["eps"] = eps;
    ordered_json rows = ordered_json::array();
    std::vector<std::pair<double, double>> mix_pts, gap_pts;
    for (double beta : betas) {
        MixingResult mix = tv_mixing_time(bundle.land, beta, eps, cap);
        double rho = spectral_gap(bundle.land, beta);
        ordered_json row;
        row["beta"] = beta;
        row["t_mix"] = mix.steps;
        row["t_mix_capped"] = mix.capped;
        row["spectral_gap"] = rho;
        rows.push_back(row);
        if (!mix.capped) mix_pts.emplace_back(beta, static_cast<double>(mix.steps));
        gap_pts.emplace_back(beta, 1.0 / rho);
        if (!matrix_prefix.empty()) {
            std::string path = matrix_prefix + "-beta" + std::to_string(beta) + ".txt";
            std::ofstream out(path);
            if (!out) throw validation_error("cannot write " + path);
            out << to_coordinate_text(build_transition_matrix(bundle.land, beta));
        }
    }
    j["table"] = rows;
    if (mix_pts.size() >= 2) {
        SlopeFit fit = estimate_exponent(mix_pts);
        j["t_mix_slope"] = fit.slope;
    }
    SlopeFit gap_fit = estimate_exponent(gap_pts);
    j["inverse_gap_slope"] = gap_fit.slope;
    if (model.grid) {
        const GridSpec& spec = *model.grid;
        // the mixing exponent is the maximum depth avoiding one stable state
        bool odd_open = spec.boundary == Boundary::open && (spec.rows * spec.cols) % 2 == 1;
        j["mixing_exponent"] = odd_open ? gamma_formula(spec) - 1 : gamma_formula(spec);
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw validation_error("cannot write " + csv_path);
        out << "beta,t_mix,t_mix_capped,spectral_gap\n";
        for (const auto& row : rows)
            out << row["beta"].get<double>() << ',' << row["t_mix"].get<std::uint64_t>() << ','
                << (row["t_mix_capped"].get<bool>() ? 1 : 0) << ','
                << row["spectral_gap"].get<double>() << '\n';
        j["csv_file"] = csv_path;
    }
    emit(j, out_path);
    return 0;
}

int cmd_cycletree(const Model& model, bool dot, const std::string& out_path) {
    LandscapeBundle bundle(model);
    CycleTree tree = cycle_tree(bundle.land);
    std::string text = dot ? tree.to_dot() : tree.to_text(bundle.land);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw validation_error("cannot write " + out_path);
        out << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gridgas: exact energy-landscape analysis and Metropolis simulation of the hard-core "
        "model on grid graphs.\n"
        "Models: --grid boundary:KxL (toroidal|cylindrical|open) or --kpartite L1,L2,...\n"
        "Configurations: e, o, empty, s<k>, hex:<digits>, @file (ascii art, '#'/'.', top row "
        "first).\n"
        "CSV columns: simulate --csv -> replica,steps,capped; exponent --csv -> "
        "beta,mean,log_mean; mixing --csv -> beta,t_mix,t_mix_capped,spectral_gap."};
    app.require_subcommand(1);

    std::string grid_arg, kpartite_arg, from = "e", to = "o", out_path, csv_path, json_path, betas;
    std::string matrix_prefix;
    std::optional<std::uint64_t> seed;
    double beta = 1.0, eps = 0.25, alpha = 0.01;
    int replicas = 1000, cap = kDefaultEnumerationCap;
    std::uint64_t max_steps = 1'000'000'000ull;
    std::uint64_t mixing_cap = std::uint64_t{1} << 40;
    bool rejection_free = false, run_ks = false, exact = false, dot = false;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--grid", grid_arg, "grid spec boundary:KxL");
        cmd->add_option("--kpartite", kpartite_arg, "complete K-partite sizes L1,L2,...");
        cmd->add_option("--out", out_path, "write the JSON report here instead of stdout");
    };

    CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "enumerate the hard-core state space");
    add_model(enumerate_cmd);
    enumerate_cmd->add_option("--cap", cap, "vertex-count cap for enumeration");
    enumerate_cmd->add_option("--json", json_path, "write the full state-space export here");

    CLI::App* landscape_cmd =
        app.add_subcommand("landscape", "exact landscape exponents and assumption checks");
    add_model(landscape_cmd);
    landscape_cmd->add_option("--from", from, "initial configuration");
    landscape_cmd->add_option("--to", to, "target configuration");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "verify the structural clauses of the grid landscape");
    add_model(verify_cmd);

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "sample hitting times");
    add_model(simulate_cmd);
    simulate_cmd->add_option("--from", from, "initial configuration");
    simulate_cmd->add_option("--to", to, "target configuration");
    simulate_cmd->add_option("--beta", beta, "inverse temperature")->required();
    simulate_cmd->add_option("--replicas", replicas, "independent replicas");
    simulate_cmd->add_option("--seed", seed, "RNG seed (generated and recorded when omitted)");
    simulate_cmd->add_option("--max-steps", max_steps, "per-replica step cap");
    simulate_cmd->add_flag("--rejection-free", rejection_free,
                           "event-driven sampling with geometric holding times");
    simulate_cmd->add_flag("--ks", run_ks, "KS test of scaled samples against Exp(1)");
    simulate_cmd->add_option("--alpha", alpha, "KS significance level");
    simulate_cmd->add_option("--csv", csv_path, "dump per-replica samples (replica,steps,capped)");

    CLI::App* exponent_cmd =
        app.add_subcommand("exponent", "mean-hitting slope across beta values");
    add_model(exponent_cmd);
    exponent_cmd->add_option("--from", from, "initial configuration");
    exponent_cmd->add_option("--to", to, "target configuration");
    exponent_cmd->add_option("--betas", betas, "comma list or lo..hi range")->required();
    exponent_cmd->add_flag("--exact", exact, "exact means by dense linear solve");
    exponent_cmd->add_option("--replicas", replicas, "replicas per beta (monte-carlo mode)");
    exponent_cmd->add_option("--seed", seed, "RNG seed (generated and recorded when omitted)");
    exponent_cmd->add_option("--max-steps", max_steps, "per-replica step cap");
    exponent_cmd->add_flag("--rejection-free", rejection_free, "event-driven sampling");
    exponent_cmd->add_option("--csv", csv_path, "slope table (beta,mean,log_mean)");

    CLI::App* mixing_cmd =
        app.add_subcommand("mixing", "total-variation mixing times and spectral gaps");
    add_model(mixing_cmd);
    mixing_cmd->add_option("--betas", betas, "comma list or lo..hi range")->required();
    mixing_cmd->add_option("--eps", eps, "total-variation threshold");
    mixing_cmd->add_option("--cap", mixing_cap, "step cap (reported as lower bound when hit)");
    mixing_cmd->add_option("--csv", csv_path, "table (beta,t_mix,t_mix_capped,spectral_gap)");
    mixing_cmd->add_option("--dump-matrix", matrix_prefix,
                           "write each transition matrix as <prefix>-beta<b>.txt coordinate text");

    CLI::App* tree_cmd = app.add_subcommand("cycletree", "export the nested cycle hierarchy");
    add_model(tree_cmd);
    tree_cmd->add_flag("--dot", dot, "emit a DOT digraph instead of indented text");

    CLI11_PARSE(app, argc, argv);

    try {
        Model model = make_model(grid_arg, kpartite_arg);
        if (enumerate_cmd->parsed()) return cmd_enumerate(model, cap, json_path, out_path);
        if (landscape_cmd->parsed()) return cmd_landscape(model, from, to, out_path);
        if (verify_cmd->parsed()) return cmd_verify(model, out_path);
        if (simulate_cmd->parsed())
            return cmd_simulate(model, from, to, beta, replicas, seed, max_steps, rejection_free,
                                run_ks, alpha, csv_path, out_path);
        if (exponent_cmd->parsed())
            return cmd_exponent(model, from, to, betas, exact, replicas, seed, max_steps,
                                rejection_free, csv_path, out_path);
        if (mixing_cmd->parsed())
            return cmd_mixing(model, betas, eps, mixing_cap, csv_path, matrix_prefix, out_path);
        if (tree_cmd->parsed()) return cmd_cycletree(model, dot, out_path);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const validation_error& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const computation_error& err) {
        std::cerr << "computation failed: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
