#include "doctest.h"

#include <algorithm>
#include <set>

#include "gridgas/enumerate.hpp"
#include "gridgas/grid.hpp"
#include "gridgas/sim.hpp"
#include "oracle.hpp"

using namespace gridgas;

TEST_CASE("grid construction and degrees") {
    GridGraph open22 = build_grid(GridSpec(2, 2, Boundary::open));
    for (int v = 0; v < 4; ++v) CHECK(open22.graph.degree(v) == 2);

    GridGraph torus = build_grid(GridSpec(4, 4, Boundary::toroidal));
    for (int v = 0; v < 16; ++v) CHECK(torus.graph.degree(v) == 4);

    GridGraph cyl = build_grid(GridSpec(4, 3, Boundary::cylindrical));
    for (int v = 0; v < 12; ++v) {
        CHECK(cyl.graph.degree(v) >= 3);
        CHECK(cyl.graph.degree(v) <= 4);
    }

    CHECK_THROWS_AS(GridSpec(3, 4, Boundary::toroidal), validation_error);
    CHECK_THROWS_AS(GridSpec(3, 4, Boundary::cylindrical), validation_error);
    CHECK_THROWS_AS(GridSpec(1, 4, Boundary::open), validation_error);
}

TEST_CASE("grid spec parsing") {
    GridSpec t = parse_grid_spec("toroidal:4x6");
    CHECK(t.rows == 4);
    CHECK(t.cols == 6);
    CHECK(t.boundary == Boundary::toroidal);
    CHECK(t.label() == "T_{4,6}");
    CHECK(parse_grid_spec("open:3x3").boundary == Boundary::open);
    CHECK(parse_grid_spec("C:4x2").boundary == Boundary::cylindrical);
    CHECK_THROWS_AS(parse_grid_spec("torus4x6"), validation_error);
    CHECK_THROWS_AS(parse_grid_spec("torus:3x4"), validation_error);
}

TEST_CASE("chessboard configurations") {
    GridSpec g33(3, 3, Boundary::open);
    Configuration e = chessboard(g33, Parity::even);
    Configuration o = chessboard(g33, Parity::odd);
    CHECK(e.particle_count() == 5);
    CHECK(e.energy() == -5);
    CHECK(o.particle_count() == 4);
    CHECK(o.energy() == -4);

    GridSpec t44(4, 4, Boundary::toroidal);
    CHECK(chessboard(t44, Parity::even).particle_count() == 8);
    GridGraph grid = build_grid(t44);
    CHECK(energy(chessboard(t44, Parity::even), grid) == -8);
    CHECK(is_independent(chessboard(t44, Parity::odd), grid.graph));
}

TEST_CASE("site parity counts") {
    for (auto spec : {GridSpec(4, 4, Boundary::toroidal), GridSpec(4, 3, Boundary::cylindrical),
                      GridSpec(3, 3, Boundary::open), GridSpec(3, 4, Boundary::open)}) {
        int even = 0;
        for (int s = 0; s < spec.site_count(); ++s) even += spec.site_even(s);
        CHECK(even == even_site_count(spec));
        CHECK(spec.site_count() - even == odd_site_count(spec));
        CHECK(even == (spec.site_count() + 1) / 2);
        if (spec.boundary != Boundary::open)
            CHECK(even_site_count(spec) == odd_site_count(spec));
    }
}

TEST_CASE("energy validates admissibility") {
    GridSpec g22(2, 2, Boundary::open);
    GridGraph grid = build_grid(g22);
    Configuration empty(4);
    CHECK(energy(empty, grid) == 0);
    Configuration one(4);
    one.set(0, true);
    CHECK(energy(one, grid) == -1);
    Configuration bad(4);
    bad.set(0, true);
    bad.set(1, true);  // adjacent
    CHECK_THROWS_AS(energy(bad, grid), validation_error);
}

TEST_CASE("wastage identities") {
    GridSpec g33(3, 3, Boundary::open);
    CHECK(wastage(chessboard(g33, Parity::even), g33) == 0);
    CHECK(wastage(chessboard(g33, Parity::odd), g33) == 1);

    GridSpec t44(4, 4, Boundary::toroidal);
    CHECK(wastage(chessboard(t44, Parity::odd), t44) == 0);

    CHECK_THROWS_AS(stripe_wastage(chessboard(g33, Parity::even), g33, 1), validation_error);

    // wastage decomposes over stripes (plus the top row when K is odd) for
    // every boundary; over rows whenever L is even
    std::vector<GridSpec> specs = {GridSpec(3, 3, Boundary::open), GridSpec(3, 4, Boundary::open),
                                   GridSpec(4, 4, Boundary::toroidal), GridSpec(4, 3, Boundary::cylindrical),
                                   GridSpec(5, 4, Boundary::open)};
    for (const auto& spec : specs) {
        GridGraph grid = build_grid(spec);
        SplitMix64 rng(2024);
        for (int trial = 0; trial < 50; ++trial) {
            Configuration c = oracle::random_admissible(grid.graph, rng);
            int total = wastage(c, spec);
            int stripes = 0;
            for (int s = 0; s < horizontal_stripe_count(spec); ++s)
                stripes += stripe_wastage(c, spec, s);
            if (spec.rows % 2 == 1) stripes += row_wastage(c, spec, spec.rows - 1);
            CHECK(total == stripes);
            if (spec.cols % 2 == 0) {
                int rows = 0;
                for (int r = 0; r < spec.rows; ++r) rows += row_wastage(c, spec, r);
                CHECK(total == rows);
            }
        }
    }
}

TEST_CASE("zero-wastage rows are bridges on the torus") {
    // rows of a toroidal grid are cycles; enumerate every admissible row
    // pattern and check U_i = 0 iff the row agrees with e or o there
    for (int L : {4, 6, 8, 10, 12}) {
        GridSpec spec(4, L, Boundary::toroidal);
        Configuration e = chessboard(spec, Parity::even);
        Configuration o = chessboard(spec, Parity::odd);
        const int row = 1;
        for (std::uint32_t m = 0; m < (1u << L); ++m) {
            bool admissible = true;
            for (int c = 0; c < L && admissible; ++c) {
                int c2 = (c + 1) % L;
                if (((m >> c) & 1) && ((m >> c2) & 1)) admissible = false;
            }
            if (!admissible) continue;
            Configuration cfg(spec.site_count());
            for (int c = 0; c < L; ++c)
                if ((m >> c) & 1) cfg.set(spec.site(c, row), true);
            bool agrees_e = true, agrees_o = true;
            for (int c = 0; c < L; ++c) {
                int s = spec.site(c, row);
                if (cfg.occupied(s) != e.occupied(s)) agrees_e = false;
                if (cfg.occupied(s) != o.occupied(s)) agrees_o = false;
            }
            CHECK((row_wastage(cfg, spec, row) == 0) == (agrees_e || agrees_o));
        }
    }
}

TEST_CASE("zero-wastage stripes are double bridges on open grids") {
    for (int L : {2, 3, 4, 5, 6, 7, 8, 9, 10}) {
        GridSpec spec(2, L, Boundary::open);
        GridGraph grid = build_grid(spec);
        StateSpace space = enumerate_states(grid.graph);
        Configuration e = chessboard(spec, Parity::even);
        Configuration o = chessboard(spec, Parity::odd);
        for (int s = 0; s < space.state_count(); ++s) {
            Configuration cfg = space.configuration(s);
            bool zero = stripe_wastage(cfg, spec, 0) == 0;
            CHECK(zero == (cfg == e || cfg == o));
        }
    }
}

TEST_CASE("zero-wastage top row agrees with e when KL is odd") {
    for (auto [K, L] : std::vector<std::pair<int, int>>{{3, 3}, {3, 5}, {5, 3}}) {
        GridSpec spec(K, L, Boundary::open);
        GridGraph grid = build_grid(spec);
        StateSpace space = enumerate_states(grid.graph);
        Configuration e = chessboard(spec, Parity::even);
        for (int s = 0; s < space.state_count(); ++s) {
            Configuration cfg = space.configuration(s);
            bool zero = row_wastage(cfg, spec, K - 1) == 0;
            bool agrees = true;
            for (int c = 0; c < L; ++c) {
                int site = spec.site(c, K - 1);
                if (cfg.occupied(site) != e.occupied(site)) agrees = false;
            }
            CHECK(zero == agrees);
        }
    }
}

TEST_CASE("bridge detection") {
    GridSpec t88(8, 8, Boundary::toroidal);
    BridgeReport rep = detect_bridges(chessboard(t88, Parity::odd), t88);
    CHECK(rep.odd_vertical_bridges.size() == 8);
    CHECK(rep.odd_horizontal_bridges.size() == 8);
    CHECK(rep.has_odd_cross);
    CHECK(!rep.has_even_cross);

    GridSpec g44(4, 4, Boundary::open);
    BridgeReport rep2 = detect_bridges(chessboard(g44, Parity::even), g44);
    CHECK(rep2.even_double_bridges_vertical.size() == 2);
    CHECK(rep2.even_double_bridges_horizontal.size() == 2);
    CHECK(rep2.odd_vertical_bridges.empty());
    CHECK(rep2.odd_horizontal_bridges.empty());

    // one full odd row on the 8x8 torus, nothing else
    Configuration one_row(t88.site_count());
    for (int c = 0; c < 8; ++c) {
        int s = t88.site(c, 0);
        if (!t88.site_even(s)) one_row.set(s, true);
    }
    BridgeReport rep3 = detect_bridges(one_row, t88);
    CHECK(rep3.odd_horizontal_bridges == std::vector<int>{0});
    CHECK(rep3.odd_vertical_bridges.empty());
    CHECK(!rep3.has_odd_cross);
}

TEST_CASE("no perpendicular bridges of different parity") {
    std::vector<GridSpec> specs = {GridSpec(4, 4, Boundary::toroidal), GridSpec(4, 4, Boundary::open),
                                   GridSpec(4, 3, Boundary::cylindrical)};
    SplitMix64 rng(7);
    for (const auto& spec : specs) {
        GridGraph grid = build_grid(spec);
        for (int t = 0; t < 200; ++t) {
            Configuration c = oracle::random_admissible(grid.graph, rng);
            BridgeReport rep = detect_bridges(c, spec);
            bool odd_v = !rep.odd_vertical_bridges.empty();
            bool odd_h = !rep.odd_horizontal_bridges.empty();
            bool even_v = !rep.even_vertical_bridges.empty();
            bool even_h = !rep.even_horizontal_bridges.empty();
            CHECK(!(odd_v && even_h));
            CHECK(!(even_v && odd_h));
        }
    }
}

namespace {

Configuration clear_sites(Configuration c, const GridSpec& spec, bool even_sites,
                          const std::vector<int>& cols) {
    for (int col : cols)
        for (int r = 0; r < spec.rows; ++r) {
            int s = spec.site(col, r);
            if (spec.site_even(s) == even_sites) c.set(s, false);
        }
    return c;
}

}  // namespace

TEST_CASE("toric reduction sweep") {
    GridSpec t44(4, 4, Boundary::toroidal);
    GridGraph grid = build_grid(t44);
    Configuration o = chessboard(t44, Parity::odd);

    PathRecord trivial = reduction_path_toric(o, t44);
    CHECK(trivial.states.size() == 1);
    CHECK(trivial.height == o.energy());

    // sigma*: e with the even sites of the first vertical stripe emptied
    Configuration sigma_star = clear_sites(chessboard(t44, Parity::even), t44, true, {0, 1});
    PathRecord path = reduction_path_toric(sigma_star, t44);
    validate_path(path, grid);
    CHECK(path.states.back() == o);
    CHECK(path.height == sigma_star.energy() + 1);

    // precondition violation names the offending site
    CHECK_THROWS_AS(reduction_path_toric(chessboard(t44, Parity::even), t44), validation_error);
    CHECK_THROWS_AS(reduction_path_toric(o, GridSpec(4, 4, Boundary::open)), validation_error);
}

TEST_CASE("toric reduction against the exact minimax oracle") {
    GridSpec t44(4, 4, Boundary::toroidal);
    GridGraph grid = build_grid(t44);
    StateSpace space = enumerate_states(grid.graph);
    Configuration o = chessboard(t44, Parity::odd);
    std::vector<int> o_target{space.find_state(o.key64())};
    std::vector<int> phi = bottleneck_heights(space, o_target);

    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Configuration start =
            clear_sites(oracle::random_admissible(grid.graph, rng), t44, true, {0, 1});
        PathRecord path = reduction_path_toric(start, t44);
        validate_path(path, grid);
        CHECK(path.states.back() == o);
        CHECK(path.height <= start.energy() + 1);
        int exact = phi[space.find_state(start.key64())];
        CHECK(exact <= path.height);
    }
}

TEST_CASE("toric reduction on the 4x6 torus against the minimax oracle") {
    GridSpec t46(4, 6, Boundary::toroidal);
    GridGraph grid = build_grid(t46);
    StateSpace space = enumerate_states(grid.graph, 36, 0);
    Configuration o = chessboard(t46, Parity::odd);
    std::vector<int> phi = bottleneck_heights(space, {space.find_state(o.key64())});

    SplitMix64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        Configuration start =
            clear_sites(oracle::random_admissible(grid.graph, rng), t46, true, {0, 1});
        PathRecord path = reduction_path_toric(start, t46);
        validate_path(path, grid);
        CHECK(path.states.back() == o);
        CHECK(path.height <= start.energy() + 1);
        CHECK(phi[space.find_state(start.key64())] <= path.height);
    }
}

TEST_CASE("open reduction sweep") {
    GridSpec g44(4, 4, Boundary::open);
    GridGraph grid = build_grid(g44);
    Configuration o = chessboard(g44, Parity::odd);
    Configuration e = chessboard(g44, Parity::even);

    CHECK(reduction_path_open(o, g44, Parity::odd).states.size() == 1);

    Configuration sigma_star = clear_sites(e, g44, true, {0});
    PathRecord path = reduction_path_open(sigma_star, g44, Parity::odd);
    validate_path(path, grid);
    CHECK(path.states.back() == o);
    CHECK(path.height == sigma_star.energy() + 1);

    CHECK_THROWS_AS(reduction_path_open(e, g44, Parity::odd), validation_error);

    // target e from a start with the odd sites of column 0 cleared
    GridSpec g34(3, 4, Boundary::open);
    GridGraph grid34 = build_grid(g34);
    SplitMix64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Configuration start = clear_sites(oracle::random_admissible(grid34.graph, rng), g34, false, {0});
        PathRecord p = reduction_path_open(start, g34, Parity::even);
        validate_path(p, grid34);
        CHECK(p.states.back() == chessboard(g34, Parity::even));
        CHECK(p.height <= start.energy() + 1);
    }

    // cylindrical grids use the same sweep
    GridSpec c43(4, 3, Boundary::cylindrical);
    GridGraph gridc = build_grid(c43);
    for (int trial = 0; trial < 100; ++trial) {
        Configuration start = clear_sites(oracle::random_admissible(gridc.graph, rng), c43, true, {0});
        PathRecord p = reduction_path_open(start, c43, Parity::odd);
        validate_path(p, gridc);
        CHECK(p.states.back() == chessboard(c43, Parity::odd));
        CHECK(p.height <= start.energy() + 1);
    }
}

TEST_CASE("gamma formula") {
    CHECK(gamma_formula(GridSpec(6, 8, Boundary::toroidal)) == 7);
    CHECK(gamma_formula(GridSpec(2, 4, Boundary::open)) == 2);
    CHECK(gamma_formula(GridSpec(8, 3, Boundary::cylindrical)) == 4);
    CHECK(gamma_formula(GridSpec(4, 4, Boundary::toroidal)) == 5);
    CHECK(gamma_formula(GridSpec(3, 3, Boundary::open)) == 3);
    CHECK(gamma_formula(GridSpec(4, 2, Boundary::cylindrical)) == 3);
}

TEST_CASE("reference path heights match the closed form") {
    CHECK(reference_path(GridSpec(4, 4, Boundary::toroidal)).height -
              chessboard(GridSpec(4, 4, Boundary::toroidal), Parity::even).energy() == 5);
    CHECK(reference_path(GridSpec(3, 3, Boundary::open)).height -
              chessboard(GridSpec(3, 3, Boundary::open), Parity::even).energy() == 3);
    CHECK(reference_path(GridSpec(4, 2, Boundary::cylindrical)).height -
              chessboard(GridSpec(4, 2, Boundary::cylindrical), Parity::even).energy() == 3);

    // every valid spec up to 8x8: ends at o, every step admissible, height
    // exactly H(e) + gamma
    for (int K = 2; K <= 8; ++K) {
        for (int L = 2; L <= 8; ++L) {
            for (Boundary b : {Boundary::toroidal, Boundary::cylindrical, Boundary::open}) {
                if (b == Boundary::toroidal && (K % 2 || L % 2)) continue;
                if (b == Boundary::toroidal && K == 2 && L == 2) continue;  // collapses to the 4-cycle
                if (b == Boundary::cylindrical && K % 2) continue;
                GridSpec spec(K, L, b);
                GridGraph grid = build_grid(spec);
                PathRecord path = reference_path(spec);
                validate_path(path, grid);
                CHECK(path.states.front() == chessboard(spec, Parity::even));
                CHECK(path.states.back() == chessboard(spec, Parity::odd));
                CHECK(path.height == chessboard(spec, Parity::even).energy() + gamma_formula(spec));
            }
        }
    }
}

TEST_CASE("grids beyond 64 sites") {
    GridSpec g99(9, 9, Boundary::open);  // 81 sites, two storage words
    GridGraph grid = build_grid(g99);
    Configuration e = chessboard(g99, Parity::even);
    Configuration o = chessboard(g99, Parity::odd);
    CHECK(e.particle_count() == 41);
    CHECK(o.particle_count() == 40);
    CHECK(is_independent(e, grid.graph));
    CHECK(wastage(o, g99) == 1);
    CHECK(from_ascii(to_ascii(o, g99), g99) == o);
    CHECK(Configuration::from_hex(e.to_hex(), 81) == e);
    CHECK(e.hamming(o) == 81);

    BridgeReport rep = detect_bridges(o, g99);
    CHECK(rep.odd_vertical_bridges.size() == 9);
    CHECK(rep.has_odd_cross);

    SplitMix64 rng(71);
    for (int t = 0; t < 20; ++t) {
        Configuration start = clear_sites(oracle::random_admissible(grid.graph, rng), g99, true, {0});
        PathRecord path = reduction_path_open(start, g99, Parity::odd);
        validate_path(path, grid);
        CHECK(path.states.back() == o);
        CHECK(path.height <= start.energy() + 1);
    }
}

TEST_CASE("ascii and hex round trips") {
    GridSpec g34(3, 4, Boundary::open);
    GridGraph grid = build_grid(g34);
    SplitMix64 rng(5);
    for (int t = 0; t < 30; ++t) {
        Configuration c = oracle::random_admissible(grid.graph, rng);
        CHECK(from_ascii(to_ascii(c, g34), g34) == c);
        CHECK(Configuration::from_hex(c.to_hex(), c.site_count()) == c);
    }
    Configuration e = chessboard(g34, Parity::even);
    std::string art = to_ascii(e, g34);
    CHECK(art == "#.#.\n.#.#\n#.#.\n");
    CHECK_THROWS_AS(from_ascii("##\n##\n", g34), validation_error);
}
