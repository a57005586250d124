#include "kpplab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace kpplab {

Grid Grid::covering_ball(int dim, Vec2 c, double radius, double h) {
    Vec2 lo{c.x - radius, dim == 2 ? c.y - radius : 0.0};
    Vec2 hi{c.x + radius, dim == 2 ? c.y + radius : 0.0};
    return covering_box(dim, lo, hi, h);
}

Grid Grid::covering_box(int dim, Vec2 lo, Vec2 hi, double h) {
    Grid g;
    g.dim = dim;
    g.h = h;
    long long ix0 = static_cast<long long>(std::floor(lo.x / h));
    long long ix1 = static_cast<long long>(std::ceil(hi.x / h));
    g.origin.x = h * static_cast<double>(ix0);
    g.nx = static_cast<int>(ix1 - ix0) + 1;
    if (dim == 2) {
        long long iy0 = static_cast<long long>(std::floor(lo.y / h));
        long long iy1 = static_cast<long long>(std::ceil(hi.y / h));
        g.origin.y = h * static_cast<double>(iy0);
        g.ny = static_cast<int>(iy1 - iy0) + 1;
    } else {
        g.origin.y = 0.0;
        g.ny = 1;
    }
    return g;
}

double Field::value_at(Vec2 p) const {
    const Grid& g = grid;
    int ix = static_cast<int>(std::lround((p.x - g.origin.x) / g.h));
    if (ix < 0 || ix >= g.nx) return 0.0;
    int iy = 0;
    if (g.dim == 2) {
        iy = static_cast<int>(std::lround((p.y - g.origin.y) / g.h));
        if (iy < 0 || iy >= g.ny) return 0.0;
    }
    return at(ix, iy);
}

double Field::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

double Field::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double Field::boundary_max() const {
    const Grid& g = grid;
    double m = 0.0;
    if (g.dim == 1) {
        m = std::max(at(0, 0), at(g.nx - 1, 0));
    } else {
        for (int ix = 0; ix < g.nx; ++ix) {
            m = std::max({m, at(ix, 0), at(ix, g.ny - 1)});
        }
        for (int iy = 0; iy < g.ny; ++iy) {
            m = std::max({m, at(0, iy), at(g.nx - 1, iy)});
        }
    }
    return m;
}

Field ball_indicator(const Grid& g, Vec2 center, double radius, double level) {
    Field f(g);
    double r2 = radius * radius;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            Vec2 c = g.center(ix, iy);
            Vec2 d = c - center;
            double dist2 = g.dim == 2 ? dot(d, d) : d.x * d.x;
            if (dist2 <= r2) f.at(ix, iy) = level;
        }
    }
    return f;
}

Field half_space_indicator(const Grid& g, Vec2 e, double offset, double level) {
    Field f(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            Vec2 c = g.center(ix, iy);
            double s = g.dim == 2 ? dot(c, e) : c.x * e.x;
            if (s < offset) f.at(ix, iy) = level;
        }
    }
    return f;
}

}  // namespace kpplab
