#pragma once
// Uniform cell grid and scalar field. Cell centers sit at origin + h*index;
// grids built through covering_* helpers share the global h-lattice, so
// index offsets map cells of one grid onto cells of another exactly.

#include <vector>

#include "kpplab/common.hpp"

namespace kpplab {

struct Grid {
    int dim = 1;       // 1 or 2
    double h = 0.1;    // spacing, > 0
    Vec2 origin;       // center of cell (0,0)
    int nx = 1, ny = 1;  // ny == 1 in dimension 1

    long long cell_count() const { return static_cast<long long>(nx) * ny; }
    long long index(int ix, int iy) const { return static_cast<long long>(iy) * nx + ix; }
    Vec2 center(int ix, int iy) const { return {origin.x + h * ix, origin.y + h * iy}; }

    // Smallest lattice-aligned grid whose cell centers cover the closed ball.
    static Grid covering_ball(int dim, Vec2 c, double radius, double h);
    static Grid covering_box(int dim, Vec2 lo, Vec2 hi, double h);
};

struct Field {
    Grid grid;
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0, double t = 0.0)
        : grid(g), values(static_cast<size_t>(g.cell_count()), fill), time(t) {}

    double& at(int ix, int iy) { return values[static_cast<size_t>(grid.index(ix, iy))]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(grid.index(ix, iy))]; }

    // Value of the cell containing p; 0 outside the grid (truncation convention).
    double value_at(Vec2 p) const;

    double max_value() const;
    double min_value() const;
    // Largest value on the outermost cell ring (dimension 1: the two end cells).
    double boundary_max() const;
};

// Two-valued ball indicator: cells whose center lies in the closed ball get
// `level`, all others 0 (no antialiasing).
Field ball_indicator(const Grid& g, Vec2 center, double radius, double level);

// Half-space indicator: level on cells with center·e < offset.
Field half_space_indicator(const Grid& g, Vec2 e, double offset, double level);

}  // namespace kpplab
