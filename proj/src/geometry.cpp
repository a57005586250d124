#include "kpplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kpplab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double point_segment_distance(Vec2 a, Vec2 b, Vec2 q) {
    Vec2 d = b - a;
    double len2 = dot(d, d);
    if (len2 <= 0.0) return norm(q - a);
    double s = std::clamp(dot(q - a, d) / len2, 0.0, 1.0);
    return norm(q - (a + d * s));
}

// Monotone-chain hull, counterclockwise; collinear inputs give a segment.
std::vector<Vec2> hull_of(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Vec2> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// Keep {x : x.n <= c}; input and output counterclockwise.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 n, double c) {
    std::vector<Vec2> out;
    size_t k = poly.size();
    for (size_t i = 0; i < k; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % k];
        double da = dot(a, n) - c, db = dot(b, n) - c;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            out.push_back(a + (b - a) * (da / (da - db)));
        }
    }
    // drop near-duplicate consecutive vertices introduced by the clipping
    std::vector<Vec2> clean;
    for (Vec2 v : out) {
        if (clean.empty() || norm(v - clean.back()) > 1e-12) clean.push_back(v);
    }
    if (clean.size() > 1 && norm(clean.front() - clean.back()) <= 1e-12) clean.pop_back();
    return clean;
}

double box_exterior_distance(int dim, Vec2 lo, Vec2 hi, Vec2 p) {
    double qx = std::max({lo.x - p.x, p.x - hi.x, 0.0});
    if (dim == 1) return qx;
    double qy = std::max({lo.y - p.y, p.y - hi.y, 0.0});
    return std::sqrt(qx * qx + qy * qy);
}

double box_sdf(int dim, Vec2 lo, Vec2 hi, Vec2 p) {
    double qx = std::max(lo.x - p.x, p.x - hi.x);
    if (dim == 1) return qx;
    double qy = std::max(lo.y - p.y, p.y - hi.y);
    double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0);
    return std::sqrt(ox * ox + oy * oy) + std::min(std::max(qx, qy), 0.0);
}

}  // namespace

std::vector<Vec2> direction_grid(int dim, int n) {
    if (dim == 1) return {Vec2{1.0, 0.0}, Vec2{-1.0, 0.0}};
    if (dim != 2) throw std::invalid_argument("direction_grid: dim must be 1 or 2");
    if (n < 3) throw std::invalid_argument("direction_grid: need at least 3 directions");
    std::vector<Vec2> d;
    d.reserve(n);
    for (int i = 0; i < n; ++i) {
        double th = kTwoPi * i / n;
        d.push_back({std::cos(th), std::sin(th)});
    }
    return d;
}

ConvexShape ConvexShape::ball_shape(int dim, double radius, int n_dirs) {
    if (radius < 0.0) throw std::invalid_argument("ball_shape: negative radius");
    ConvexShape s;
    s.dim = dim;
    s.dirs = direction_grid(dim, n_dirs);
    s.w.assign(s.dirs.size(), radius);
    return s;
}

double ConvexShape::support(Vec2 e) const {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < dirs.size(); ++i) best = std::max(best, w[i] * dot(dirs[i], e));
    return best;
}

double ConvexShape::min_radial() const {
    return *std::min_element(w.begin(), w.end());
}

double ConvexShape::max_radial() const {
    return *std::max_element(w.begin(), w.end());
}

bool ConvexShape::consistent(double tol) const {
    for (size_t i = 0; i < dirs.size(); ++i) {
        for (size_t j = 0; j < dirs.size(); ++j) {
            if (w[j] * dot(dirs[j], dirs[i]) > w[i] + tol) return false;
        }
    }
    return true;
}

Polygon inner_polygon(const ConvexShape& s) {
    std::vector<Vec2> pts;
    pts.reserve(s.dirs.size());
    for (size_t i = 0; i < s.dirs.size(); ++i) pts.push_back(s.dirs[i] * s.w[i]);
    if (s.dim == 1) {
        double lo = pts[0].x, hi = pts[0].x;
        for (Vec2 p : pts) {
            lo = std::min(lo, p.x);
            hi = std::max(hi, p.x);
        }
        return Polygon{{Vec2{lo, 0.0}, Vec2{hi, 0.0}}};
    }
    return Polygon{hull_of(std::move(pts))};
}

Polygon outer_polygon(const ConvexShape& s) {
    if (s.dim == 1) {
        // {x <= w+} and {-x <= w-} give the segment [-w-, w+]
        double wp = 0.0, wm = 0.0;
        for (size_t i = 0; i < s.dirs.size(); ++i) {
            if (s.dirs[i].x > 0.0) wp = s.w[i];
            else wm = s.w[i];
        }
        return Polygon{{Vec2{-wm, 0.0}, Vec2{wp, 0.0}}};
    }
    double b = 2.0 * s.max_radial() + 1.0;
    std::vector<Vec2> poly = {{-b, -b}, {b, -b}, {b, b}, {-b, b}};
    for (size_t i = 0; i < s.dirs.size(); ++i) {
        poly = clip_half_plane(poly, s.dirs[i], s.w[i]);
        if (poly.empty()) break;
    }
    return Polygon{std::move(poly)};
}

bool polygon_contains_point(const Polygon& p, Vec2 q) {
    size_t k = p.pts.size();
    if (k < 3) return false;
    for (size_t i = 0; i < k; ++i) {
        Vec2 a = p.pts[i], b = p.pts[(i + 1) % k];
        if (cross(b - a, q - a) < 0.0) return false;
    }
    return true;
}

double polygon_point_distance(const Polygon& p, Vec2 q) {
    size_t k = p.pts.size();
    if (k == 0) return std::numeric_limits<double>::infinity();
    if (k == 1) return norm(q - p.pts[0]);
    if (polygon_contains_point(p, q)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < k; ++i) {
        best = std::min(best, point_segment_distance(p.pts[i], p.pts[(i + 1) % k], q));
    }
    return best;
}

double polygon_support(const Polygon& p, Vec2 e) {
    double best = -std::numeric_limits<double>::infinity();
    for (Vec2 v : p.pts) best = std::max(best, dot(v, e));
    return p.pts.empty() ? 0.0 : best;
}

double hausdorff_distance(const ConvexShape& a, const ConvexShape& b, int n_probe) {
    if (a.dim != b.dim) throw std::invalid_argument("hausdorff_distance: dimension mismatch");
    std::vector<Vec2> probes = direction_grid(a.dim, a.dim == 1 ? 2 : n_probe);
    double worst = 0.0;
    for (Vec2 e : probes) worst = std::max(worst, std::fabs(a.support(e) - b.support(e)));
    return worst;
}

double shape_model_gap(const ConvexShape& s, int n_probe) {
    Polygon in = inner_polygon(s), out = outer_polygon(s);
    std::vector<Vec2> probes = direction_grid(s.dim, s.dim == 1 ? 2 : n_probe);
    double worst = 0.0;
    for (Vec2 e : probes) {
        worst = std::max(worst, polygon_support(out, e) - polygon_support(in, e));
    }
    return worst;
}

ShapeFit shape_from_speeds(int dim, const std::vector<Vec2>& dirs,
                           const std::vector<double>& speeds) {
    if (dirs.size() != speeds.size() || dirs.empty()) {
        throw std::invalid_argument("shape_from_speeds: direction/speed size mismatch");
    }
    for (double v : speeds) {
        if (!(v > 0.0)) throw std::invalid_argument("shape_from_speeds: nonpositive speed");
    }
    ShapeFit fit;
    fit.shape.dim = dim;
    fit.shape.dirs = dirs;
    for (Vec2& e : fit.shape.dirs) {
        double n = norm(e);
        if (n <= 0.0) throw std::invalid_argument("shape_from_speeds: zero direction");
        e = e * (1.0 / n);
    }
    fit.shape.w = speeds;
    double defect = 0.0;
    for (size_t i = 0; i < dirs.size(); ++i) {
        defect = std::max(defect, fit.shape.support(fit.shape.dirs[i]) - speeds[i]);
    }
    fit.convexity_defect = defect;
    return fit;
}

// ------------------------------------------------------------------ regions

double RegionSpec::signed_distance(Vec2 x) const {
    switch (kind) {
        case RegionKind::ball:
            return norm(x - center) - radius;
        case RegionKind::box:
            return box_sdf(dim, lo, hi, x);
        case RegionKind::box_union: {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [l, h] : boxes) best = std::min(best, box_sdf(dim, l, h, x));
            return best;
        }
        case RegionKind::half_space:
            return dot(x, e) - offset;
        case RegionKind::box_complement:
            return -box_sdf(dim, lo, hi, x);
    }
    return std::numeric_limits<double>::infinity();
}

RegionSpec RegionSpec::make_ball(int dim, Vec2 c, double r) {
    if (r <= 0.0) throw std::invalid_argument("region ball: radius must be positive");
    RegionSpec g;
    g.kind = RegionKind::ball;
    g.dim = dim;
    g.center = c;
    g.radius = r;
    return g;
}

RegionSpec RegionSpec::make_box(int dim, Vec2 lo, Vec2 hi) {
    if (lo.x >= hi.x || (dim == 2 && lo.y >= hi.y)) {
        throw std::invalid_argument("region box: empty box");
    }
    RegionSpec g;
    g.kind = RegionKind::box;
    g.dim = dim;
    g.lo = lo;
    g.hi = hi;
    return g;
}

RegionSpec RegionSpec::make_box_union(int dim, std::vector<std::pair<Vec2, Vec2>> boxes) {
    if (boxes.empty()) throw std::invalid_argument("region box_union: no boxes");
    for (const auto& [l, h] : boxes) {
        if (l.x >= h.x || (dim == 2 && l.y >= h.y)) {
            throw std::invalid_argument("region box_union: empty box");
        }
    }
    RegionSpec g;
    g.kind = RegionKind::box_union;
    g.dim = dim;
    g.boxes = std::move(boxes);
    return g;
}

RegionSpec RegionSpec::make_half_space(int dim, Vec2 e, double offset) {
    double n = norm(e);
    if (n <= 0.0) throw std::invalid_argument("region half_space: zero direction");
    RegionSpec g;
    g.kind = RegionKind::half_space;
    g.dim = dim;
    g.e = e * (1.0 / n);
    g.offset = offset;
    return g;
}

RegionSpec RegionSpec::make_box_complement(int dim, Vec2 lo, Vec2 hi) {
    if (lo.x >= hi.x || (dim == 2 && lo.y >= hi.y)) {
        throw std::invalid_argument("region box_complement: empty box");
    }
    RegionSpec g;
    g.kind = RegionKind::box_complement;
    g.dim = dim;
    g.lo = lo;
    g.hi = hi;
    return g;
}

bool erode_contains(const RegionSpec& g, double r, Vec2 x) {
    return g.signed_distance(x) < -r;
}

bool dilate_contains(const RegionSpec& g, double r, Vec2 x) {
    return g.signed_distance(x) < r;
}

// --------------------------------------------------- Minkowski-sum membership

MinkowskiSet::MinkowskiSet(RegionSpec g, const ConvexShape& s, double t)
    : g_(std::move(g)), t_(t), dim_(s.dim) {
    if (t < 0.0) throw std::invalid_argument("minkowski_sum: negative time");
    if (g_.dim != s.dim) throw std::invalid_argument("minkowski_sum: dimension mismatch");
    auto build = [&](const Polygon& base) {
        Probe pr;
        if (t == 0.0 || base.pts.empty()) {
            pr.poly.pts = {Vec2{0.0, 0.0}};
        } else {
            pr.poly.pts.reserve(base.pts.size());
            // reflection x -> -t*x reverses orientation; reversing the
            // vertex order restores counterclockwise
            for (size_t i = base.pts.size(); i-- > 0;) {
                pr.poly.pts.push_back(base.pts[i] * (-t));
            }
        }
        pr.mnx = pr.mxx = pr.poly.pts[0].x;
        pr.mny = pr.mxy = pr.poly.pts[0].y;
        for (Vec2 v : pr.poly.pts) {
            pr.mnx = std::min(pr.mnx, v.x);
            pr.mxx = std::max(pr.mxx, v.x);
            pr.mny = std::min(pr.mny, v.y);
            pr.mxy = std::max(pr.mxy, v.y);
            pr.circum = std::max(pr.circum, norm(v));
        }
        size_t k = pr.poly.pts.size();
        if (k >= 2 && dim_ == 2) {
            for (size_t i = 0; i < k; ++i) {
                Vec2 d = pr.poly.pts[(i + 1) % k] - pr.poly.pts[i];
                double len = norm(d);
                if (len <= 1e-300) continue;
                Vec2 n{d.y / len, -d.x / len};
                double mn = dot(pr.poly.pts[0], n), mx = mn;
                for (Vec2 v : pr.poly.pts) {
                    double pv = dot(v, n);
                    mn = std::min(mn, pv);
                    mx = std::max(mx, pv);
                }
                pr.normals.push_back(n);
                pr.pmin.push_back(mn);
                pr.pmax.push_back(mx);
            }
        }
        return pr;
    };
    inner_ = build(inner_polygon(s));
    outer_ = build(outer_polygon(s));
}

bool MinkowskiSet::probe_meets_shrunk(const Probe& p, Vec2 x, double r) const {
    // strict separating-axis test against the open box (lo, hi)
    auto sat = [&](Vec2 lo, Vec2 hi) {
        if (!(x.x + p.mnx < hi.x && lo.x < x.x + p.mxx)) return false;
        if (dim_ == 2) {
            if (!(x.y + p.mny < hi.y && lo.y < x.y + p.mxy)) return false;
            Vec2 bc{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
            Vec2 bh{0.5 * (hi.x - lo.x), 0.5 * (hi.y - lo.y)};
            for (size_t i = 0; i < p.normals.size(); ++i) {
                Vec2 n = p.normals[i];
                double pc = dot(x, n);
                double bcn = dot(bc, n);
                double br = bh.x * std::fabs(n.x) + bh.y * std::fabs(n.y);
                if (!(pc + p.pmin[i] < bcn + br && bcn - br < pc + p.pmax[i])) return false;
            }
        }
        return true;
    };
    switch (g_.kind) {
        case RegionKind::ball: {
            double rr = g_.radius - r;
            if (rr <= 0.0) return false;
            if (dim_ == 1) {
                return x.x + p.mnx < g_.center.x + rr && g_.center.x - rr < x.x + p.mxx;
            }
            return polygon_point_distance(p.poly, g_.center - x) < rr;
        }
        case RegionKind::box: {
            Vec2 lo{g_.lo.x + r, g_.lo.y + r}, hi{g_.hi.x - r, g_.hi.y - r};
            if (lo.x >= hi.x || (dim_ == 2 && lo.y >= hi.y)) return false;
            return sat(lo, hi);
        }
        case RegionKind::box_union: {
            for (const auto& [l, h] : g_.boxes) {
                Vec2 lo{l.x + r, l.y + r}, hi{h.x - r, h.y - r};
                if (lo.x >= hi.x || (dim_ == 2 && lo.y >= hi.y)) continue;
                if (sat(lo, hi)) return true;
            }
            return false;
        }
        case RegionKind::half_space: {
            double mn = std::numeric_limits<double>::infinity();
            for (Vec2 v : p.poly.pts) mn = std::min(mn, dot(v, g_.e));
            return dot(x, g_.e) + mn < g_.offset - r;
        }
        case RegionKind::box_complement: {
            for (Vec2 v : p.poly.pts) {
                if (box_sdf(dim_, g_.lo, g_.hi, x + v) > r) return true;
            }
            return false;
        }
    }
    return false;
}

bool MinkowskiSet::probe_meets_grown(const Probe& p, Vec2 x, double r) const {
    switch (g_.kind) {
        case RegionKind::ball: {
            double rr = g_.radius + r;
            if (dim_ == 1) {
                return x.x + p.mnx < g_.center.x + rr && g_.center.x - rr < x.x + p.mxx;
            }
            return polygon_point_distance(p.poly, g_.center - x) < rr;
        }
        case RegionKind::box:
        case RegionKind::box_union: {
            auto meets_box = [&](Vec2 lo, Vec2 hi) {
                if (dim_ == 1) {
                    return x.x + p.mnx < hi.x + r && lo.x - r < x.x + p.mxx;
                }
                // plain strict SAT first, then the distance form for r > 0
                bool sat_hit = [&] {
                    if (!(x.x + p.mnx < hi.x && lo.x < x.x + p.mxx)) return false;
                    if (!(x.y + p.mny < hi.y && lo.y < x.y + p.mxy)) return false;
                    Vec2 bc{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
                    Vec2 bh{0.5 * (hi.x - lo.x), 0.5 * (hi.y - lo.y)};
                    for (size_t i = 0; i < p.normals.size(); ++i) {
                        Vec2 n = p.normals[i];
                        double pc = dot(x, n);
                        double bcn = dot(bc, n);
                        double br = bh.x * std::fabs(n.x) + bh.y * std::fabs(n.y);
                        if (!(pc + p.pmin[i] < bcn + br && bcn - br < pc + p.pmax[i])) {
                            return false;
                        }
                    }
                    return true;
                }();
                if (sat_hit) return true;
                if (r <= 0.0) return false;
                double best = std::numeric_limits<double>::infinity();
                for (Vec2 v : p.poly.pts) {
                    best = std::min(best, box_exterior_distance(dim_, lo, hi, x + v));
                }
                Vec2 corners[4] = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
                for (Vec2 c : corners) {
                    best = std::min(best, polygon_point_distance(p.poly, c - x));
                }
                return best < r;
            };
            if (g_.kind == RegionKind::box) return meets_box(g_.lo, g_.hi);
            for (const auto& [l, h] : g_.boxes) {
                if (meets_box(l, h)) return true;
            }
            return false;
        }
        case RegionKind::half_space: {
            double mn = std::numeric_limits<double>::infinity();
            for (Vec2 v : p.poly.pts) mn = std::min(mn, dot(v, g_.e));
            return dot(x, g_.e) + mn < g_.offset + r;
        }
        case RegionKind::box_complement: {
            for (Vec2 v : p.poly.pts) {
                if (box_sdf(dim_, g_.lo, g_.hi, x + v) > -r) return true;
            }
            return false;
        }
    }
    return false;
}

bool MinkowskiSet::contains_shrunk(Vec2 x, double r) const {
    double s = g_.signed_distance(x);
    if (s < -r) return true;  // the probe contains its own anchor point
    if (s - inner_.circum >= -r) return false;
    return probe_meets_shrunk(inner_, x, r);
}

bool MinkowskiSet::contains_grown(Vec2 x, double r) const {
    double s = g_.signed_distance(x);
    if (s < r) return true;
    if (s - outer_.circum >= r) return false;
    return probe_meets_grown(outer_, x, r);
}

// ---------------------------------------------------------------- mixed zone

MixedZoneResult mixed_zone(const Field& u, const RegionSpec& g, const ConvexShape& s, double t,
                           double band, double eta0, double eta1, double scale, Vec2 shift,
                           double window) {
    if (!(0.0 < eta0 && eta0 < eta1 && eta1 < 1.0)) {
        throw std::invalid_argument("mixed_zone: need 0 < eta0 < eta1 < 1");
    }
    if (band < 0.0 || scale <= 0.0 || t < 0.0 || window < 0.0) {
        throw std::invalid_argument("mixed_zone: negative band, scale, time or window");
    }
    MinkowskiSet ms(g, s, t);
    const Grid& gr = u.grid;
    MixedZoneResult res;
    res.cell_measure = gr.dim == 2 ? (scale * gr.h) * (scale * gr.h) : scale * gr.h;
    const double win2 = window * window;
    for (int iy = 0; iy < gr.ny; ++iy) {
        for (int ix = 0; ix < gr.nx; ++ix) {
            Vec2 xi = gr.center(ix, iy) * scale - shift;
            if (window > 0.0 && dot(xi, xi) > win2) continue;
            double uv = u.at(ix, iy);
            if (uv < eta1 && ms.contains_shrunk(xi, band)) {
                ++res.inside_low;
                ++res.cells;
            } else if (uv > eta0 && !ms.contains_grown(xi, band)) {
                ++res.outside_high;
                ++res.cells;
            }
        }
    }
    res.measure = res.cells * res.cell_measure;
    return res;
}

}  // namespace kpplab
