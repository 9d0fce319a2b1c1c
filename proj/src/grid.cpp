#include "gridgas/grid.hpp"

#include <algorithm>
#include <sstream>

namespace gridgas {

std::string boundary_name(Boundary b) {
    switch (b) {
        case Boundary::toroidal: return "toroidal";
        case Boundary::cylindrical: return "cylindrical";
        case Boundary::open: return "open";
    }
    return "?";
}

void GridSpec::validate() const {
    if (rows < 2 || cols < 2)
        throw validation_error("grid spec requires K >= 2 and L >= 2, got K=" +
                               std::to_string(rows) + " L=" + std::to_string(cols));
    if (boundary == Boundary::toroidal && (rows % 2 != 0 || cols % 2 != 0))
        throw validation_error("toroidal grid requires K and L even (bipartiteness assumption), got K=" +
                               std::to_string(rows) + " L=" + std::to_string(cols));
    if (boundary == Boundary::cylindrical && rows % 2 != 0)
        throw validation_error("cylindrical grid requires K even (bipartiteness assumption), got K=" +
                               std::to_string(rows));
}

std::string GridSpec::label() const {
    const char* tag = boundary == Boundary::toroidal ? "T" : boundary == Boundary::cylindrical ? "C" : "G";
    return std::string(tag) + "_{" + std::to_string(rows) + "," + std::to_string(cols) + "}";
}

GridSpec parse_grid_spec(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw validation_error("grid spec '" + text + "' is not of the form boundary:KxL");
    std::string kind = text.substr(0, colon);
    std::string dims = text.substr(colon + 1);
    for (auto& c : kind) c = static_cast<char>(tolower(c));
    Boundary b;
    if (kind == "toroidal" || kind == "torus" || kind == "t")
        b = Boundary::toroidal;
    else if (kind == "cylindrical" || kind == "cylinder" || kind == "c")
        b = Boundary::cylindrical;
    else if (kind == "open" || kind == "g")
        b = Boundary::open;
    else
        throw validation_error("unknown boundary '" + kind + "' (toroidal|cylindrical|open)");
    auto x = dims.find('x');
    if (x == std::string::npos) throw validation_error("grid dimensions '" + dims + "' are not KxL");
    int K = 0, L = 0;
    try {
        K = std::stoi(dims.substr(0, x));
        L = std::stoi(dims.substr(x + 1));
    } catch (const std::exception&) {
        throw validation_error("grid dimensions '" + dims + "' are not KxL");
    }
    return GridSpec(K, L, b);
}

GridGraph build_grid(const GridSpec& spec) {
    spec.validate();
    const int K = spec.rows, L = spec.cols;
    Graph g(K * L);
    for (int r = 0; r < K; ++r) {
        for (int c = 0; c < L; ++c) {
            int s = spec.site(c, r);
            // horizontal neighbor to the right (wraps on the torus)
            if (c + 1 < L)
                g.add_edge(s, spec.site(c + 1, r));
            else if (spec.boundary == Boundary::toroidal && L > 2)
                g.add_edge(s, spec.site(0, r));
            // vertical neighbor above (wraps on torus and cylinder)
            if (r + 1 < K)
                g.add_edge(s, spec.site(c, r + 1));
            else if (spec.boundary != Boundary::open && K > 2)
                g.add_edge(s, spec.site(c, 0));
        }
    }
    // L == 2 toroidal and K == 2 toroidal/cylindrical wraps would duplicate
    // existing edges; the hard-core model is insensitive to multiplicity.
    g.validate();
    return GridGraph{spec, std::move(g)};
}

Configuration chessboard(const GridSpec& spec, Parity parity) {
    spec.validate();
    Configuration c(spec.site_count());
    bool want_even = parity == Parity::even;
    for (int s = 0; s < spec.site_count(); ++s) {
        if (spec.site_even(s) == want_even) c.set(s, true);
    }
    return c;
}

int even_site_count(const GridSpec& spec) { return (spec.site_count() + 1) / 2; }
int odd_site_count(const GridSpec& spec) { return spec.site_count() / 2; }

int energy(const Configuration& config, const GridGraph& grid) {
    if (config.site_count() != grid.graph.vertex_count)
        throw validation_error("configuration size does not match grid");
    if (!is_independent(config, grid.graph))
        throw validation_error("configuration violates hard-core constraints");
    return config.energy();
}

int wastage(const Configuration& config, const GridSpec& spec) {
    GridGraph grid = build_grid(spec);
    int h = energy(config, grid);
    int h_e = -even_site_count(spec);
    return h - h_e;
}

int row_wastage(const Configuration& config, const GridSpec& spec, int row) {
    if (row < 0 || row >= spec.rows) throw validation_error("row index out of range");
    int particles = 0;
    for (int c = 0; c < spec.cols; ++c) particles += config.occupied(spec.site(c, row));
    return (spec.cols + 1) / 2 - particles;
}

int horizontal_stripe_count(const GridSpec& spec) { return spec.rows / 2; }
int vertical_stripe_count(const GridSpec& spec) { return spec.cols / 2; }

int stripe_wastage(const Configuration& config, const GridSpec& spec, int stripe) {
    if (stripe < 0 || stripe >= horizontal_stripe_count(spec))
        throw validation_error("stripe index " + std::to_string(stripe) +
                               " out of range (topmost row of an odd-K grid belongs to no stripe)");
    int particles = 0;
    for (int r = 2 * stripe; r <= 2 * stripe + 1; ++r)
        for (int c = 0; c < spec.cols; ++c) particles += config.occupied(spec.site(c, r));
    return spec.cols - particles;
}

namespace {

bool line_matches(const Configuration& config, const GridSpec& spec, const Configuration& pattern,
                  bool column, int index) {
    if (column) {
        for (int r = 0; r < spec.rows; ++r) {
            int s = spec.site(index, r);
            if (config.occupied(s) != pattern.occupied(s)) return false;
        }
    } else {
        for (int c = 0; c < spec.cols; ++c) {
            int s = spec.site(c, index);
            if (config.occupied(s) != pattern.occupied(s)) return false;
        }
    }
    return true;
}

}  // namespace

BridgeReport detect_bridges(const Configuration& config, const GridSpec& spec) {
    BridgeReport rep;
    Configuration e = chessboard(spec, Parity::even);
    Configuration o = chessboard(spec, Parity::odd);
    for (int c = 0; c < spec.cols; ++c) {
        if (line_matches(config, spec, o, true, c)) rep.odd_vertical_bridges.push_back(c);
        if (line_matches(config, spec, e, true, c)) rep.even_vertical_bridges.push_back(c);
    }
    for (int r = 0; r < spec.rows; ++r) {
        if (line_matches(config, spec, o, false, r)) rep.odd_horizontal_bridges.push_back(r);
        if (line_matches(config, spec, e, false, r)) rep.even_horizontal_bridges.push_back(r);
    }
    rep.has_odd_cross = !rep.odd_vertical_bridges.empty() && !rep.odd_horizontal_bridges.empty();
    rep.has_even_cross = !rep.even_vertical_bridges.empty() && !rep.even_horizontal_bridges.empty();
    auto both = [&](const std::vector<int>& lines, int a, int b) {
        return std::find(lines.begin(), lines.end(), a) != lines.end() &&
               std::find(lines.begin(), lines.end(), b) != lines.end();
    };
    for (int s = 0; s < vertical_stripe_count(spec); ++s) {
        if (both(rep.odd_vertical_bridges, 2 * s, 2 * s + 1)) rep.odd_double_bridges_vertical.push_back(s);
        if (both(rep.even_vertical_bridges, 2 * s, 2 * s + 1)) rep.even_double_bridges_vertical.push_back(s);
    }
    for (int s = 0; s < horizontal_stripe_count(spec); ++s) {
        if (both(rep.odd_horizontal_bridges, 2 * s, 2 * s + 1)) rep.odd_double_bridges_horizontal.push_back(s);
        if (both(rep.even_horizontal_bridges, 2 * s, 2 * s + 1)) rep.even_double_bridges_horizontal.push_back(s);
    }
    return rep;
}

void validate_path(const PathRecord& path, const GridGraph& grid) {
    if (path.states.empty()) throw computation_error("empty path");
    int height = path.states[0].energy();
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        if (!is_independent(path.states[i], grid.graph))
            throw computation_error("path state " + std::to_string(i) + " is inadmissible");
        height = std::max(height, path.states[i].energy());
        if (i > 0 && path.states[i].hamming(path.states[i - 1]) != 1)
            throw computation_error("path states " + std::to_string(i - 1) + "," + std::to_string(i) +
                                    " do not differ in exactly one site");
    }
    if (height != path.height) throw computation_error("recorded path height is wrong");
}

namespace {

// Incrementally built single-site-update path.
class PathBuilder {
public:
    PathBuilder(Configuration start, const GridGraph& grid)
        : grid_(grid), current_(std::move(start)), energy_(current_.energy()) {
        record_.states.push_back(current_);
        record_.height = energy_;
    }

    const Configuration& current() const { return current_; }

    void remove_particle(int site) {
        if (!current_.occupied(site)) throw computation_error("sweep removal from vacant site");
        current_.set(site, false);
        ++energy_;
        push();
    }

    void add_particle(int site) {
        if (!can_add_particle(current_, grid_.graph, site))
            throw computation_error("sweep addition would violate hard-core constraints");
        current_.set(site, true);
        --energy_;
        push();
    }

    PathRecord finish() && { return std::move(record_); }

private:
    void push() {
        record_.states.push_back(current_);
        record_.height = std::max(record_.height, energy_);
    }

    const GridGraph& grid_;
    Configuration current_;
    int energy_;
    PathRecord record_;
};

// One stage of the sweep: fill the target-parity sites of one line, clearing
// the blocking sites of the next line just before each addition. `column`
// selects whether lines are columns or rows.
void sweep_stage(PathBuilder& b, const GridSpec& spec, bool column, int line, int next_line,
                 Parity fill) {
    int len = column ? spec.rows : spec.cols;
    for (int p = 0; p < len; ++p) {
        int fill_site = column ? spec.site(line, p) : spec.site(p, line);
        bool fill_even = spec.site_even(fill_site);
        if ((fill == Parity::even) != fill_even) continue;
        if (next_line >= 0) {
            int clear_site = column ? spec.site(next_line, p) : spec.site(p, next_line);
            if (b.current().occupied(clear_site)) b.remove_particle(clear_site);
        }
        if (!b.current().occupied(fill_site)) b.add_particle(fill_site);
    }
}

// Column/row sweep across the whole grid. Toric style walks lines
// 1,...,n-1,0 with wrap-around clearing; open style walks 0,...,n-1.
void run_sweep(PathBuilder& b, const GridSpec& spec, bool column, bool toric_style, Parity fill) {
    int n = column ? spec.cols : spec.rows;
    for (int k = 0; k < n; ++k) {
        int line = toric_style ? (k + 1) % n : k;
        int next = line + 1;
        if (next >= n) next = toric_style ? 0 : -1;
        sweep_stage(b, spec, column, line, next, fill);
    }
}

void require_admissible_start(const Configuration& start, const GridGraph& grid) {
    if (start.site_count() != grid.graph.vertex_count)
        throw validation_error("start configuration size does not match grid");
    if (!is_independent(start, grid.graph))
        throw validation_error("start configuration violates hard-core constraints");
}

void require_empty(const Configuration& start, const GridSpec& spec, bool even_sites,
                   const std::vector<int>& cols, const std::string& what) {
    for (int c : cols) {
        for (int r = 0; r < spec.rows; ++r) {
            int s = spec.site(c, r);
            if (spec.site_even(s) == even_sites && start.occupied(s))
                throw validation_error("reduction precondition violated: occupied " +
                                       std::string(even_sites ? "even" : "odd") + " site (col=" +
                                       std::to_string(c) + ", row=" + std::to_string(r) + ") in " + what);
        }
    }
}

Configuration transpose_config(const Configuration& config, const GridSpec& spec,
                               const GridSpec& tspec) {
    Configuration out(tspec.site_count());
    for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c)
            if (config.occupied(spec.site(c, r))) out.set(tspec.site(r, c), true);
    return out;
}

PathRecord transpose_path(const PathRecord& path, const GridSpec& tspec, const GridSpec& spec) {
    PathRecord out;
    out.height = path.height;
    out.states.reserve(path.states.size());
    for (const auto& s : path.states) out.states.push_back(transpose_config(s, tspec, spec));
    return out;
}

PathRecord finish_checked(PathBuilder&& b, const GridGraph& grid, const Configuration& target,
                          int start_energy) {
    PathRecord rec = std::move(b).finish();
    if (!(rec.states.back() == target)) throw computation_error("reduction sweep missed its target");
    if (rec.height > start_energy + 1)
        throw computation_error("reduction sweep exceeded H(start) + 1");
    (void)grid;
    return rec;
}

}  // namespace

PathRecord reduction_path_toric(const Configuration& start, const GridSpec& spec) {
    if (spec.boundary != Boundary::toroidal)
        throw validation_error("toric reduction requires a toroidal grid");
    GridGraph grid = build_grid(spec);
    require_admissible_start(start, grid);
    require_empty(start, spec, true, {0, 1}, "the first vertical stripe");
    PathBuilder b(start, grid);
    run_sweep(b, spec, true, true, Parity::odd);
    return finish_checked(std::move(b), grid, chessboard(spec, Parity::odd), start.energy());
}

PathRecord reduction_path_open(const Configuration& start, const GridSpec& spec, Parity target) {
    if (spec.boundary == Boundary::toroidal)
        throw validation_error("open-grid reduction requires an open or cylindrical grid");
    GridGraph grid = build_grid(spec);
    require_admissible_start(start, grid);
    require_empty(start, spec, target == Parity::odd, {0}, "the first column");
    PathBuilder b(start, grid);
    run_sweep(b, spec, true, false, target);
    return finish_checked(std::move(b), grid, chessboard(spec, target), start.energy());
}

namespace {

// Ascent from e that empties the even sites of the given columns (or rows),
// then the matching sweep down to o.
PathRecord reference_path_direct(const GridSpec& spec) {
    GridGraph grid = build_grid(spec);
    Configuration e = chessboard(spec, Parity::even);
    PathBuilder b(e, grid);
    bool column_sweep = true;
    bool toric_style = false;
    std::vector<int> ascent_sites;
    auto collect_even_sites_in_cols = [&](std::initializer_list<int> cols) {
        for (int s = 0; s < spec.site_count(); ++s)
            for (int c : cols)
                if (spec.col_of(s) == c && spec.site_even(s)) ascent_sites.push_back(s);
    };
    auto collect_even_sites_in_rows = [&](std::initializer_list<int> rows) {
        for (int s = 0; s < spec.site_count(); ++s)
            for (int r : rows)
                if (spec.row_of(s) == r && spec.site_even(s)) ascent_sites.push_back(s);
    };
    switch (spec.boundary) {
        case Boundary::toroidal:
            toric_style = true;
            collect_even_sites_in_cols({0, 1});
            break;
        case Boundary::open:
            collect_even_sites_in_cols({0});
            break;
        case Boundary::cylindrical:
            if (spec.rows / 2 <= spec.cols) {
                collect_even_sites_in_cols({0});
            } else {
                // K/2 > L: sweep rows toric-style instead (rows wrap).
                column_sweep = false;
                toric_style = true;
                collect_even_sites_in_rows({0, 1});
            }
            break;
    }
    std::sort(ascent_sites.begin(), ascent_sites.end());
    for (int s : ascent_sites) b.remove_particle(s);
    run_sweep(b, spec, column_sweep, toric_style, Parity::odd);
    PathRecord rec = std::move(b).finish();
    if (!(rec.states.back() == chessboard(spec, Parity::odd)))
        throw computation_error("reference path did not end at o");
    return rec;
}

}  // namespace

PathRecord reference_path(const GridSpec& spec) {
    gamma_formula(spec);  // also rejects the degenerate 2x2 torus
    bool transpose = false;
    switch (spec.boundary) {
        case Boundary::toroidal: transpose = spec.rows > spec.cols; break;
        case Boundary::open: transpose = (spec.rows + 1) / 2 > (spec.cols + 1) / 2; break;
        case Boundary::cylindrical: transpose = false; break;  // row sweep handles K/2 > L
    }
    PathRecord rec;
    if (transpose) {
        GridSpec tspec(spec.cols, spec.rows, spec.boundary);
        rec = transpose_path(reference_path_direct(tspec), tspec, spec);
    } else {
        rec = reference_path_direct(spec);
    }
    int expected = -even_site_count(spec) + gamma_formula(spec);
    if (rec.height != expected)
        throw computation_error("reference path height " + std::to_string(rec.height) +
                                " differs from the expected " + std::to_string(expected));
    return rec;
}

int gamma_formula(const GridSpec& spec) {
    spec.validate();
    if (spec.boundary == Boundary::toroidal && spec.rows == 2 && spec.cols == 2)
        throw validation_error(
            "the 2x2 torus collapses to the 4-cycle (wrap edges duplicate), its barrier is 2 and "
            "falls outside the toroidal closed form; use open:2x2");
    switch (spec.boundary) {
        case Boundary::toroidal: return std::min(spec.rows, spec.cols) + 1;
        case Boundary::open: return std::min((spec.rows + 1) / 2, (spec.cols + 1) / 2) + 1;
        case Boundary::cylindrical: return std::min(spec.rows / 2, spec.cols) + 1;
    }
    throw validation_error("bad boundary");
}

std::string to_ascii(const Configuration& config, const GridSpec& spec) {
    std::ostringstream out;
    for (int r = spec.rows - 1; r >= 0; --r) {
        for (int c = 0; c < spec.cols; ++c) out << (config.occupied(spec.site(c, r)) ? '#' : '.');
        out << '\n';
    }
    return out.str();
}

Configuration from_ascii(const std::string& art, const GridSpec& spec) {
    std::vector<std::string> lines;
    std::istringstream in(art);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (static_cast<int>(lines.size()) != spec.rows)
        throw validation_error("ascii art has " + std::to_string(lines.size()) + " rows, expected " +
                               std::to_string(spec.rows));
    Configuration c(spec.site_count());
    for (int i = 0; i < spec.rows; ++i) {
        const std::string& l = lines[i];
        if (static_cast<int>(l.size()) != spec.cols)
            throw validation_error("ascii art row " + std::to_string(i) + " has " +
                                   std::to_string(l.size()) + " columns, expected " +
                                   std::to_string(spec.cols));
        int row = spec.rows - 1 - i;  // top row first
        for (int col = 0; col < spec.cols; ++col) {
            if (l[col] == '#')
                c.set(spec.site(col, row), true);
            else if (l[col] != '.')
                throw validation_error(std::string("ascii art contains '") + l[col] + "'");
        }
    }
    return c;
}

}  // namespace gridgas
