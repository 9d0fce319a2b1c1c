#pragma once

// Shared front-end plumbing: resolving a model description (grid or
// complete K-partite) and named configurations. Used by the CLI and the
// python bindings.

#include <fstream>
#include <optional>
#include <string>

#include "gridgas/grid.hpp"
#include "gridgas/kpartite.hpp"

namespace gridgas {

struct Model {
    std::optional<GridSpec> grid;
    std::optional<KPartiteSpec> kpartite;
    Graph graph;
    std::string label;

    int sites() const { return graph.vertex_count; }
};

inline Model make_model(const std::string& grid_arg, const std::string& kpartite_arg) {
    if (grid_arg.empty() == kpartite_arg.empty())
        throw validation_error("exactly one of the grid and K-partite descriptions is required");
    Model m;
    if (!grid_arg.empty()) {
        m.grid = parse_grid_spec(grid_arg);
        m.graph = build_grid(*m.grid).graph;
        m.label = m.grid->label();
    } else {
        m.kpartite = parse_kpartite_spec(kpartite_arg);
        m.graph = build_kpartite(*m.kpartite);
        m.label = m.kpartite->label();
    }
    return m;
}

// named configurations: e, o, empty, s<k>, hex:<digits>, @<ascii art file>
inline Configuration named_config(const Model& model, const std::string& name) {
    if (name == "empty") return Configuration(model.sites());
    if (name == "e" || name == "o") {
        if (!model.grid) throw validation_error("configuration '" + name + "' needs a grid model");
        return chessboard(*model.grid, name == "e" ? Parity::even : Parity::odd);
    }
    if (name.size() >= 2 && name[0] == 's' && std::isdigit(static_cast<unsigned char>(name[1]))) {
        if (!model.kpartite)
            throw validation_error("configuration '" + name + "' needs a K-partite model");
        return sigma_config(*model.kpartite, std::stoi(name.substr(1)));
    }
    if (name.rfind("hex:", 0) == 0) return Configuration::from_hex(name.substr(4), model.sites());
    if (!name.empty() && name[0] == '@') {
        if (!model.grid) throw validation_error("ascii-art configurations need a grid model");
        std::ifstream in(name.substr(1));
        if (!in) throw validation_error("cannot open configuration file " + name.substr(1));
        std::string art((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return from_ascii(art, *model.grid);
    }
    throw validation_error("unknown configuration name '" + name +
                           "' (use e, o, empty, s<k>, hex:<digits> or @file)");
}

}  // namespace gridgas
