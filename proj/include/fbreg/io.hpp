// File formats: solution snapshots as CSV (x,y,u,active, 17 significant
// digits for lossless double round-trips) with a JSON sidecar, operator and
// grid (de)serialization, and the boundary-data descriptors.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbreg/grid.hpp"
#include "fbreg/operators.hpp"
#include "fbreg/solver.hpp"

namespace fbreg {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json operator_to_json(const OperatorSpec& op) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(op.kind);
    j["lambda0"] = op.ellipticity.lambda0;
    j["lambda1"] = op.ellipticity.lambda1;
    if (op.kind == OperatorKind::BellmanFamily) {
        nlohmann::ordered_json fam = nlohmann::ordered_json::array();
        for (const SymMat& m : op.family) fam.push_back({m.a11, m.a12, m.a22});
        j["family"] = fam;
    }
    return j;
}

inline OperatorSpec operator_from_json(const nlohmann::json& j) {
    OperatorSpec op;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "laplace")
        op.kind = OperatorKind::Laplace;
    else if (kind == "pucci_plus")
        op.kind = OperatorKind::PucciPlus;
    else if (kind == "pucci_minus")
        op.kind = OperatorKind::PucciMinus;
    else if (kind == "bellman")
        op.kind = OperatorKind::BellmanFamily;
    else
        throw std::invalid_argument("operator_from_json: unknown kind '" + kind + "'");
    op.ellipticity.lambda0 = j.value("lambda0", 1.0);
    op.ellipticity.lambda1 = j.value("lambda1", 1.0);
    if (j.contains("family")) {
        for (const auto& row : j.at("family")) {
            if (row.size() != 3)
                throw std::invalid_argument("operator_from_json: family entries are [a11,a12,a22]");
            op.family.emplace_back(row[0].get<double>(), row[1].get<double>(),
                                   row[2].get<double>());
        }
    }
    op.validate();
    return op;
}

inline nlohmann::ordered_json grid_to_json(const Grid2& g) {
    return {{"half_width", g.half_width}, {"n_cells", g.n_cells}};
}

inline Grid2 grid_from_json(const nlohmann::json& j) {
    Grid2 g;
    g.half_width = j.at("half_width").get<double>();
    g.n_cells = j.at("n_cells").get<int>();
    g.validate();
    return g;
}

// Boundary descriptors: "zero", "radial:r0=<v>", "halfspace:gamma=<v>,angle=<v>",
// or a path to a CSV file with an x,y,u header.
inline ScalarField make_boundary_field(const Grid2& grid, const std::string& descriptor);

inline ScalarField load_field_csv(const Grid2& grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_field_csv: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind("x,y,u", 0) != 0)
        throw std::runtime_error("load_field_csv: bad header in " + path);
    ScalarField u(grid);
    std::vector<bool> seen(static_cast<std::size_t>(grid.node_count()), false);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("load_field_csv: short row");
            vals[k] = std::strtod(tok.c_str(), nullptr);
        }
        int ix = 0, iy = 0;
        grid.nearest_node(vals[0], vals[1], ix, iy);
        if (std::abs(grid.coord(ix) - vals[0]) > 1e-9 || std::abs(grid.coord(iy) - vals[1]) > 1e-9)
            throw std::runtime_error("load_field_csv: node off the expected grid");
        u.at(ix, iy) = vals[2];
        seen[grid.index(ix, iy)] = true;
    }
    for (bool s : seen)
        if (!s) throw std::runtime_error("load_field_csv: incomplete grid in " + path);
    return u;
}

inline ScalarField make_boundary_field(const Grid2& grid, const std::string& descriptor) {
    grid.validate();
    if (descriptor == "zero") return ScalarField(grid, 0.0);
    auto parse_params = [&](const std::string& body) {
        std::vector<std::pair<std::string, double>> params;
        std::istringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("boundary descriptor: expected key=value in '" +
                                            descriptor + "'");
            params.emplace_back(item.substr(0, eq), std::strtod(item.c_str() + eq + 1, nullptr));
        }
        return params;
    };
    if (descriptor.rfind("radial:", 0) == 0) {
        double r0 = -1.0;
        for (const auto& [k, v] : parse_params(descriptor.substr(7)))
            if (k == "r0") r0 = v;
        if (!(r0 > 0.0 && r0 < grid.half_width))
            throw std::invalid_argument("boundary descriptor: radial needs 0 < r0 < half_width");
        return make_field(grid, [r0](double x, double y) { return radial_oracle(r0, x, y); });
    }
    if (descriptor.rfind("halfspace:", 0) == 0) {
        double gamma = 1.0, angle = 0.0;
        for (const auto& [k, v] : parse_params(descriptor.substr(10))) {
            if (k == "gamma") gamma = v;
            if (k == "angle") angle = v;
        }
        if (!(gamma > 0.0))
            throw std::invalid_argument("boundary descriptor: halfspace needs gamma > 0");
        return make_field(grid, [gamma, angle](double x, double y) {
            return halfspace_oracle(gamma, angle, x, y);
        });
    }
    return load_field_csv(grid, descriptor);
}

struct SolutionSnapshot {
    Grid2 grid;
    OperatorSpec operator_spec;
    double tol = 0.0;
    double hessian_bound_K = 0.0;
    Solution solution;
};

inline void write_solution(const SolutionSnapshot& snap, const std::string& csv_path,
                           const std::string& json_path) {
    {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("write_solution: cannot open " + csv_path);
        out << "x,y,u,active\n";
        const Grid2& g = snap.grid;
        for (int iy = 0; iy <= g.n_cells; ++iy)
            for (int ix = 0; ix <= g.n_cells; ++ix)
                out << format_g17(g.coord(ix)) << ',' << format_g17(g.coord(iy)) << ','
                    << format_g17(snap.solution.u.at(ix, iy)) << ','
                    << (snap.solution.active_mask[g.index(ix, iy)] ? 1 : 0) << '\n';
    }
    nlohmann::ordered_json j;
    j["grid"] = grid_to_json(snap.grid);
    j["operator"] = operator_to_json(snap.operator_spec);
    j["tol"] = snap.tol;
    j["K"] = snap.hessian_bound_K;
    j["iterations"] = snap.solution.iterations;
    j["residual"] = snap.solution.residual;
    j["converged"] = snap.solution.converged;
    j["activation_threshold"] = snap.solution.activation_threshold;
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("write_solution: cannot open " + json_path);
    out << j.dump(2) << '\n';
}

inline SolutionSnapshot load_solution(const std::string& csv_path, const std::string& json_path) {
    std::ifstream jin(json_path);
    if (!jin) throw std::runtime_error("load_solution: cannot open " + json_path);
    nlohmann::json j = nlohmann::json::parse(jin);
    SolutionSnapshot snap;
    snap.grid = grid_from_json(j.at("grid"));
    snap.operator_spec = operator_from_json(j.at("operator"));
    snap.tol = j.value("tol", 0.0);
    snap.hessian_bound_K = j.value("K", 0.0);
    snap.solution.iterations = j.value("iterations", 0);
    snap.solution.residual = j.value("residual", 0.0);
    snap.solution.converged = j.value("converged", false);
    snap.solution.activation_threshold = j.value("activation_threshold", 0.0);

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("load_solution: cannot open " + csv_path);
    std::string header;
    std::getline(in, header);
    if (header != "x,y,u,active") throw std::runtime_error("load_solution: bad snapshot header");
    const Grid2& g = snap.grid;
    snap.solution.u = ScalarField(g);
    snap.solution.active_mask.assign(static_cast<std::size_t>(g.node_count()), 0);
    std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double x = 0, y = 0, u = 0;
        int active = 0;
        for (int k = 0; k < 4; ++k) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("load_solution: short row");
            if (k == 0) x = std::strtod(tok.c_str(), nullptr);
            if (k == 1) y = std::strtod(tok.c_str(), nullptr);
            if (k == 2) u = std::strtod(tok.c_str(), nullptr);
            if (k == 3) active = std::atoi(tok.c_str());
        }
        int ix = 0, iy = 0;
        g.nearest_node(x, y, ix, iy);
        if (std::abs(g.coord(ix) - x) > 1e-9 || std::abs(g.coord(iy) - y) > 1e-9)
            throw std::runtime_error("load_solution: snapshot grid mismatch");
        snap.solution.u.at(ix, iy) = u;
        snap.solution.active_mask[g.index(ix, iy)] = active ? 1 : 0;
        seen[g.index(ix, iy)] = true;
    }
    for (bool s : seen)
        if (!s) throw std::runtime_error("load_solution: incomplete snapshot");
    return snap;
}

}  // namespace fbreg
