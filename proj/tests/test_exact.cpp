#include "doctest.h"

#include <cmath>

#include "gridgas/analysis.hpp"
#include "gridgas/enumerate.hpp"
#include "gridgas/exact.hpp"
#include "gridgas/grid.hpp"
#include "gridgas/kpartite.hpp"
#include "gridgas/sim.hpp"

using namespace gridgas;

namespace {

EnergyLandscape grid_landscape(const GridSpec& spec, StateSpace& space_out) {
    GridGraph grid = build_grid(spec);
    space_out = enumerate_states(grid.graph);
    return as_landscape(space_out);
}

}  // namespace

TEST_CASE("transition matrix entries") {
    StateSpace space;
    EnergyLandscape land = grid_landscape(GridSpec(2, 2, Boundary::open), space);

    // beta = 0 reduces to the connectivity matrix
    TransitionMatrix q = build_transition_matrix(land, 0.0);
    for (int x = 0; x < land.state_count(); ++x) {
        CHECK(q.P.row(x).sum() == doctest::Approx(1.0).epsilon(1e-12));
        for (const auto* e = land.neighbors_begin(x); e != land.neighbors_end(x); ++e)
            CHECK(q.P(x, e->target) == doctest::Approx(e->q));
    }

    GridSpec spec(2, 2, Boundary::open);
    int e_state = space.find_state(chessboard(spec, Parity::even).key64());
    TransitionMatrix tm = build_transition_matrix(land, 1.0);
    int one_removed = -1;
    for (const auto* e = land.neighbors_begin(e_state); e != land.neighbors_end(e_state); ++e)
        one_removed = e->target;
    CHECK(tm.P(e_state, one_removed) == doctest::Approx(0.25 * std::exp(-1.0)));
}

TEST_CASE("gibbs stationarity and reversibility") {
    StateSpace space;
    EnergyLandscape land = grid_landscape(GridSpec(2, 3, Boundary::open), space);
    const double beta = 2.0;
    TransitionMatrix tm = build_transition_matrix(land, beta);
    Eigen::VectorXd mu = gibbs_distribution(land, beta);
    CHECK((mu.transpose() * tm.P - mu.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(reversibility_residual(tm, mu) < 1e-10);

    Eigen::VectorXd mu0 = gibbs_distribution(land, 0.0);
    for (int x = 0; x < land.state_count(); ++x)
        CHECK(mu0(x) == doctest::Approx(1.0 / land.state_count()));

    // mu(e)/mu(empty) = e^{2 beta} on the 2x2 grid
    StateSpace space22;
    EnergyLandscape land22 = grid_landscape(GridSpec(2, 2, Boundary::open), space22);
    Eigen::VectorXd mu22 = gibbs_distribution(land22, 1.5);
    GridSpec g22(2, 2, Boundary::open);
    int e_state = space22.find_state(chessboard(g22, Parity::even).key64());
    int empty = space22.find_state(0);
    CHECK(mu22(e_state) / mu22(empty) == doctest::Approx(std::exp(2 * 1.5)));
}

TEST_CASE("gibbs mass concentrates on the chessboards") {
    StateSpace space;
    EnergyLandscape land = grid_landscape(GridSpec(4, 4, Boundary::toroidal), space);
    GridSpec t44(4, 4, Boundary::toroidal);
    Eigen::VectorXd mu = gibbs_distribution(land, 10.0);
    double mass = mu(space.find_state(chessboard(t44, Parity::even).key64())) +
                  mu(space.find_state(chessboard(t44, Parity::odd).key64()));
    CHECK(mass > 0.999);
}

TEST_CASE("exact mean hitting times") {
    // two-state chain: E tau = 1 / P(x -> y)
    EnergyLandscape pair = make_landscape({0, -1}, {{0, 1}});
    const double beta = 1.7;
    TransitionMatrix tm = build_transition_matrix(pair, beta);
    CHECK(mean_hitting_exact(pair, 0, {1}, beta) == doctest::Approx(1.0 / tm.P(0, 1)));
    CHECK(mean_hitting_exact(pair, 1, {0}, beta) == doctest::Approx(1.0 / tm.P(1, 0)));
    CHECK_THROWS_AS(mean_hitting_exact(pair, 0, {0}, beta), validation_error);

    // K-partite closed form at beta = 8, both k1 regimes
    KPartiteSpec spec({2, 2, 1});
    StateSpace space = enumerate_states(build_kpartite(spec));
    EnergyLandscape land = as_landscape(space);
    int s1 = space.find_state(sigma_config(spec, 1).key64());
    int s2 = space.find_state(sigma_config(spec, 2).key64());
    int s3 = space.find_state(sigma_config(spec, 3).key64());
    double m1 = mean_hitting_exact(land, s1, {s2}, 8.0);
    double m3 = mean_hitting_exact(land, s3, {s2}, 8.0);
    CHECK(std::abs(m1 / predicted_mean(spec, 1, 2, 8.0) - 1.0) < 0.1);
    CHECK(std::abs(m3 / predicted_mean(spec, 3, 2, 8.0) - 1.0) < 0.1);
}

TEST_CASE("monte carlo agrees with the exact mean on G24") {
    GridSpec spec(2, 4, Boundary::open);
    GridGraph grid = build_grid(spec);
    StateSpace space;
    EnergyLandscape land = grid_landscape(spec, space);
    const double beta = 4.0;
    double exact = mean_hitting_exact(land, space.find_state(chessboard(spec, Parity::even).key64()),
                                      {space.find_state(chessboard(spec, Parity::odd).key64())}, beta);
    SimConfig sim;
    sim.beta = beta;
    sim.seed = 21;
    sim.replicas = 3000;
    sim.max_steps = std::uint64_t{1} << 62;
    sim.rejection_free = true;
    std::vector<HittingSample> samples = sample_hitting(
        grid.graph, chessboard(spec, Parity::even), {chessboard(spec, Parity::odd)}, sim);
    double mean = 0, sq = 0;
    for (const auto& smp : samples) {
        mean += static_cast<double>(smp.steps);
        sq += static_cast<double>(smp.steps) * smp.steps;
    }
    mean /= sim.replicas;
    double se = std::sqrt((sq / sim.replicas - mean * mean) / sim.replicas);
    CHECK(std::abs(mean - exact) < 3 * se);
}

TEST_CASE("tv mixing time") {
    StateSpace space;
    EnergyLandscape land = grid_landscape(GridSpec(2, 2, Boundary::open), space);
    MixingResult m0 = tv_mixing_time(land, 0.0, 0.25);
    CHECK(!m0.capped);
    CHECK(m0.steps <= 20);

    MixingResult strict = tv_mixing_time(land, 1.0, 0.125);
    MixingResult mid = tv_mixing_time(land, 1.0, 0.25);
    MixingResult loose = tv_mixing_time(land, 1.0, 0.5);
    CHECK(strict.steps >= mid.steps);
    CHECK(mid.steps >= loose.steps);

    MixingResult capped = tv_mixing_time(land, 6.0, 0.25, 64);
    CHECK(capped.capped);
    CHECK(capped.steps == 64);
}

TEST_CASE("spectral gap") {
    // two-state chain at beta = 0: gap = 2p with flip probability p
    EnergyLandscape pair = make_landscape({0, -1}, {{0, 1}});
    double gap0 = spectral_gap(pair, 0.0);
    CHECK(gap0 == doctest::Approx(2 * 0.5));

    // rho_beta e^{Gamma beta} stays inside a bounded band on each landscape
    for (auto spec : {GridSpec(2, 2, Boundary::open), GridSpec(2, 3, Boundary::open)}) {
        StateSpace space;
        EnergyLandscape land = grid_landscape(spec, space);
        double gamma = gamma_formula(spec);
        double lo = 1e300, hi = 0;
        for (double beta = 2.0; beta <= 8.0; beta += 1.0) {
            double v = spectral_gap(land, beta) * std::exp(gamma * beta);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi / lo < 10.0);
    }
}

TEST_CASE("coordinate text dump") {
    EnergyLandscape pair = make_landscape({0, -1}, {{0, 1}});
    TransitionMatrix tm = build_transition_matrix(pair, 0.0);
    std::string text = to_coordinate_text(tm);
    CHECK(text.find("0 0 0.5") != std::string::npos);
    CHECK(text.find("0 1 0.5") != std::string::npos);
    CHECK(text.find("1 0 0.5") != std::string::npos);
    CHECK(text.find("1 1 0.5") != std::string::npos);
}

TEST_CASE("mixing time and gap track the barrier on the 2x2 grid") {
    StateSpace space;
    EnergyLandscape land = grid_landscape(GridSpec(2, 2, Boundary::open), space);
    std::vector<std::pair<double, double>> mix_pts;
    for (double beta : {2.0, 3.0, 4.0, 5.0}) {
        MixingResult m = tv_mixing_time(land, beta, 0.25);
        REQUIRE(!m.capped);
        mix_pts.emplace_back(beta, static_cast<double>(m.steps));
    }
    SlopeFit fit = estimate_exponent(mix_pts);
    CHECK(std::abs(fit.slope - 2.0) < 0.3);
}
