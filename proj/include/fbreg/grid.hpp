// Uniform node-centered grid on the square [-L, L]^2, scalar fields on it,
// and the 9-point discrete Hessian (exact on quadratics).
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fbreg/symmat.hpp"

namespace fbreg {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Grid2 {
    double half_width = 1.0;  // domain is [-half_width, half_width]^2
    int n_cells = 64;         // even, >= 8; nodes_per_side = n_cells + 1

    double h() const { return 2.0 * half_width / n_cells; }
    int nodes_per_side() const { return n_cells + 1; }
    int node_count() const { return nodes_per_side() * nodes_per_side(); }
    double coord(int i) const { return -half_width + i * h(); }
    int index(int ix, int iy) const { return iy * nodes_per_side() + ix; }

    bool valid() const { return half_width > 0.0 && n_cells >= 8 && n_cells % 2 == 0; }
    void validate() const {
        if (!valid()) throw std::invalid_argument("Grid2: need half_width > 0, n_cells >= 8 and even");
    }

    bool operator==(const Grid2& o) const {
        return half_width == o.half_width && n_cells == o.n_cells;
    }

    // nearest node indices to (x, y)
    void nearest_node(double x, double y, int& ix, int& iy) const {
        ix = static_cast<int>(std::lround((x + half_width) / h()));
        iy = static_cast<int>(std::lround((y + half_width) / h()));
        ix = std::max(0, std::min(n_cells, ix));
        iy = std::max(0, std::min(n_cells, iy));
    }
};

struct ScalarField {
    Grid2 grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid2& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.node_count()), fill) {}

    double at(int ix, int iy) const { return values[grid.index(ix, iy)]; }
    double& at(int ix, int iy) { return values[grid.index(ix, iy)]; }

    // bilinear interpolation; (x, y) must lie in the closed square
    double sample(double x, double y) const {
        const double L = grid.half_width, h = grid.h();
        if (x < -L - 1e-12 || x > L + 1e-12 || y < -L - 1e-12 || y > L + 1e-12)
            throw std::out_of_range("ScalarField::sample: point outside grid");
        const double sx = std::min(std::max((x + L) / h, 0.0), static_cast<double>(grid.n_cells));
        const double sy = std::min(std::max((y + L) / h, 0.0), static_cast<double>(grid.n_cells));
        int ix = std::min(static_cast<int>(sx), grid.n_cells - 1);
        int iy = std::min(static_cast<int>(sy), grid.n_cells - 1);
        const double fx = sx - ix, fy = sy - iy;
        return (1 - fx) * (1 - fy) * at(ix, iy) + fx * (1 - fy) * at(ix + 1, iy) +
               (1 - fx) * fy * at(ix, iy + 1) + fx * fy * at(ix + 1, iy + 1);
    }
};

struct BoolField {
    Grid2 grid;
    std::vector<std::uint8_t> values;

    BoolField() = default;
    explicit BoolField(const Grid2& g, bool fill = false)
        : grid(g), values(static_cast<std::size_t>(g.node_count()), fill ? 1 : 0) {}

    bool at(int ix, int iy) const { return values[grid.index(ix, iy)] != 0; }
    void set(int ix, int iy, bool v) { values[grid.index(ix, iy)] = v ? 1 : 0; }
};

inline ScalarField make_field(const Grid2& g, const std::function<double(double, double)>& f) {
    g.validate();
    ScalarField u(g);
    for (int iy = 0; iy <= g.n_cells; ++iy)
        for (int ix = 0; ix <= g.n_cells; ++ix) u.at(ix, iy) = f(g.coord(ix), g.coord(iy));
    return u;
}

// Central second differences; needs the full 3x3 neighborhood.
inline SymMat discrete_hessian(const ScalarField& u, int ix, int iy) {
    const Grid2& g = u.grid;
    if (ix < 1 || iy < 1 || ix > g.n_cells - 1 || iy > g.n_cells - 1)
        throw std::invalid_argument("discrete_hessian: node lacks a full stencil");
    const double h2 = g.h() * g.h();
    const double c = u.at(ix, iy);
    const double dxx = (u.at(ix + 1, iy) + u.at(ix - 1, iy) - 2.0 * c) / h2;
    const double dyy = (u.at(ix, iy + 1) + u.at(ix, iy - 1) - 2.0 * c) / h2;
    const double dxy = (u.at(ix + 1, iy + 1) + u.at(ix - 1, iy - 1) - u.at(ix - 1, iy + 1) -
                        u.at(ix + 1, iy - 1)) /
                       (4.0 * h2);
    return SymMat(dxx, dxy, dyy);
}

// Central first differences; needs the 4 axis neighbors.
inline Point discrete_gradient(const ScalarField& u, int ix, int iy) {
    const Grid2& g = u.grid;
    if (ix < 1 || iy < 1 || ix > g.n_cells - 1 || iy > g.n_cells - 1)
        throw std::invalid_argument("discrete_gradient: node lacks a full stencil");
    const double two_h = 2.0 * g.h();
    return {(u.at(ix + 1, iy) - u.at(ix - 1, iy)) / two_h,
            (u.at(ix, iy + 1) - u.at(ix, iy - 1)) / two_h};
}

// Visits every node with |x - c| <= r (+ tiny slack against roundoff).
template <typename Fn>
void for_each_node_in_ball(const Grid2& g, double cx, double cy, double r, Fn&& fn) {
    const double h = g.h();
    const double rr = r + 1e-12;
    const int ix_lo = std::max(0, static_cast<int>(std::ceil((cx - rr + g.half_width) / h - 1e-9)));
    const int ix_hi = std::min(g.n_cells, static_cast<int>(std::floor((cx + rr + g.half_width) / h + 1e-9)));
    for (int ix = ix_lo; ix <= ix_hi; ++ix) {
        const double x = g.coord(ix);
        for (int iy = 0; iy <= g.n_cells; ++iy) {
            const double y = g.coord(iy);
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= rr * rr) fn(ix, iy, x, y);
        }
    }
}

}  // namespace fbreg
