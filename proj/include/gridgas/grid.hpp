#pragma once

#include <string>
#include <vector>

#include "gridgas/bitconfig.hpp"
#include "gridgas/graph.hpp"

namespace gridgas {

enum class Boundary { toroidal, cylindrical, open };

enum class Parity { even, odd };

std::string boundary_name(Boundary b);

// K x L grid with one of three boundary conditions. Sites are addressed as
// (column, row) with (0,0) at the bottom-left; site index = row * L + column.
// A site is even when column + row is even.
struct GridSpec {
    int rows = 0;     // K
    int cols = 0;     // L
    Boundary boundary = Boundary::open;

    GridSpec() = default;
    GridSpec(int K, int L, Boundary b) : rows(K), cols(L), boundary(b) { validate(); }

    int site_count() const { return rows * cols; }
    int site(int col, int row) const { return row * cols + col; }
    int col_of(int site) const { return site % cols; }
    int row_of(int site) const { return site / cols; }
    bool site_even(int site) const { return ((site % cols) + (site / cols)) % 2 == 0; }

    // K and L at least 2; K even for cylindrical grids, K and L even for
    // toroidal grids (the bipartiteness assumption).
    void validate() const;

    std::string label() const;  // e.g. "T_{4,6}"
};

// Parse "toroidal:4x6" / "open:3x3" / "cylindrical:4x2" (also "T:4x6" etc.).
GridSpec parse_grid_spec(const std::string& text);

struct GridGraph {
    GridSpec spec;
    Graph graph;
};

GridGraph build_grid(const GridSpec& spec);

// Chessboard configuration e (all even sites) or o (all odd sites).
Configuration chessboard(const GridSpec& spec, Parity parity);

int even_site_count(const GridSpec& spec);  // |V_e| = ceil(KL/2)
int odd_site_count(const GridSpec& spec);   // |V_o| = floor(KL/2)

// H(sigma); rejects inadmissible configurations.
int energy(const Configuration& config, const GridGraph& grid);

// U(sigma) = H(sigma) - H(e) >= 0.
int wastage(const Configuration& config, const GridSpec& spec);

// U_i(sigma) = ceil(L/2) - (particles in row i).
int row_wastage(const Configuration& config, const GridSpec& spec, int row);

// U^S_i(sigma) = L - (particles in horizontal stripe i), stripe i being rows
// 2i and 2i+1. For odd K the topmost row belongs to no stripe.
int stripe_wastage(const Configuration& config, const GridSpec& spec, int stripe);

int horizontal_stripe_count(const GridSpec& spec);  // floor(K/2)
int vertical_stripe_count(const GridSpec& spec);    // floor(L/2)

struct BridgeReport {
    std::vector<int> odd_vertical_bridges;     // column indices agreeing with o
    std::vector<int> even_vertical_bridges;    // column indices agreeing with e
    std::vector<int> odd_horizontal_bridges;   // row indices agreeing with o
    std::vector<int> even_horizontal_bridges;  // row indices agreeing with e
    bool has_odd_cross = false;
    bool has_even_cross = false;
    std::vector<int> odd_double_bridges_vertical;    // vertical stripes = o
    std::vector<int> even_double_bridges_vertical;   // vertical stripes = e
    std::vector<int> odd_double_bridges_horizontal;  // horizontal stripes = o
    std::vector<int> even_double_bridges_horizontal; // horizontal stripes = e
};

BridgeReport detect_bridges(const Configuration& config, const GridSpec& spec);

// A path of admissible configurations; consecutive states differ in exactly
// one site (void moves are compressed out). height = max energy along it.
struct PathRecord {
    std::vector<Configuration> states;
    int height = 0;
};

// Checks single-site steps, admissibility of every state and the recorded
// height; throws computation_error on violation.
void validate_path(const PathRecord& path, const GridGraph& grid);

// Sweep to o on a toroidal grid. Requires no particles on the even sites of
// the first vertical stripe (columns 0 and 1). Guarantees height <= H(start)+1.
PathRecord reduction_path_toric(const Configuration& start, const GridSpec& spec);

// Sweep to e or o on an open or cylindrical grid. Target o requires empty
// even sites in column 0, target e empty odd sites there.
PathRecord reduction_path_open(const Configuration& start, const GridSpec& spec, Parity target);

// Path e -> o of height H(e) + gamma_formula(spec), built as a column (or
// stripe) emptying ascent followed by the matching reduction sweep.
PathRecord reference_path(const GridSpec& spec);

// Energy barrier between e and o:
//   min{K,L}+1 (toroidal), min{ceil(K/2),ceil(L/2)}+1 (open), min{K/2,L}+1
//   (cylindrical).
int gamma_formula(const GridSpec& spec);

// Row-major ASCII art, '#' occupied and '.' empty, top row first.
std::string to_ascii(const Configuration& config, const GridSpec& spec);
Configuration from_ascii(const std::string& art, const GridSpec& spec);

}  // namespace gridgas
