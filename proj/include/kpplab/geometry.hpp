#pragma once
// Convex shape calculus for growth sets: sampled support data with an inner
// polygon (hull of the samples) and an outer polygon (half-plane
// intersection), analytic region catalog, Minkowski-sum membership with
// certified one-sided tests, erosion/dilation predicates, and the mixed-zone
// measure that scores a field against an expanding reference set.
//
// Membership conventions: all regions are open sets, so tests use strict
// inequalities; shapes are evaluated through closed polygon models (sets
// differing by their boundary are indistinguishable on a grid).  The two
// polygon models of a shape bracket set membership only when the sample
// data is pairwise consistent (each sample point satisfies every outer
// half-plane); consistent() reports this.

#include <utility>
#include <vector>

#include "kpplab/grid.hpp"

namespace kpplab {

// Uniform direction grid: d=2 gives n angles 2*pi*k/n, d=1 gives {+x, -x}.
std::vector<Vec2> direction_grid(int dim, int n);

struct ConvexShape {
    int dim = 2;
    std::vector<Vec2> dirs;  // unit vectors
    std::vector<double> w;   // nonnegative radial samples, one per direction

    // Ball of the given radius sampled on n directions.
    static ConvexShape ball_shape(int dim, double radius, int n_dirs);

    // Support of the inner model conv{w_i e_i}: max_i w_i * (e_i . e).
    double support(Vec2 e) const;
    double min_radial() const;
    double max_radial() const;
    // Every sample point satisfies every outer constraint w_j e_j.e_i <= w_i.
    bool consistent(double tol = 1e-12) const;
};

// Convex polygon, counterclockwise; 1 or 2 points mean a point or a segment.
struct Polygon {
    std::vector<Vec2> pts;
};

Polygon inner_polygon(const ConvexShape& s);  // hull of the sample points
Polygon outer_polygon(const ConvexShape& s);  // intersection of half-planes

bool polygon_contains_point(const Polygon& p, Vec2 q);
double polygon_point_distance(const Polygon& p, Vec2 q);  // 0 inside
double polygon_support(const Polygon& p, Vec2 e);

// Sup-norm distance of support functions over a fine probe grid; for convex
// bodies this is the Hausdorff distance.
double hausdorff_distance(const ConvexShape& a, const ConvexShape& b, int n_probe = 512);
// Support gap between the outer and inner models of one shape.
double shape_model_gap(const ConvexShape& s, int n_probe = 512);

struct ShapeFit {
    ConvexShape shape;
    // max_i (support of the sample hull at e_i minus w_i); 0 for data that
    // is the radial function of a convex set sampled exactly.
    double convexity_defect = 0.0;
};
ShapeFit shape_from_speeds(int dim, const std::vector<Vec2>& dirs,
                           const std::vector<double>& speeds);

// ------------------------------------------------------------------ regions

enum class RegionKind { ball, box, box_union, half_space, box_complement };

struct RegionSpec {
    RegionKind kind = RegionKind::ball;
    int dim = 2;
    Vec2 center;
    double radius = 1.0;
    Vec2 lo, hi;                               // box, box_complement
    std::vector<std::pair<Vec2, Vec2>> boxes;  // box_union
    Vec2 e{1.0, 0.0};                          // half_space {x.e < offset}
    double offset = 0.0;

    bool contains(Vec2 x) const { return signed_distance(x) < 0.0; }
    // Exact for ball/box/half_space/box_complement; for box unions the
    // interior depth is the per-box minimum, which understates depth where
    // boxes overlap (erosion becomes conservative there).
    double signed_distance(Vec2 x) const;
    bool bounded() const { return kind != RegionKind::half_space && kind != RegionKind::box_complement; }

    static RegionSpec make_ball(int dim, Vec2 c, double r);
    static RegionSpec make_box(int dim, Vec2 lo, Vec2 hi);
    static RegionSpec make_box_union(int dim, std::vector<std::pair<Vec2, Vec2>> boxes);
    static RegionSpec make_half_space(int dim, Vec2 e, double offset = 0.0);
    static RegionSpec make_box_complement(int dim, Vec2 lo, Vec2 hi);
};

// Plain erosion/dilation membership: erode = {sdf < -r} (interior depth
// beyond r), dilate = {sdf < r}; r = 0 gives the open set itself.
bool erode_contains(const RegionSpec& g, double r, Vec2 x);
bool dilate_contains(const RegionSpec& g, double r, Vec2 x);

// --------------------------------------------------- Minkowski-sum membership
//
// x in G + t*S  iff  the reflected probe x - t*S meets G.  Two probes are
// kept: the inner polygon certifies membership from below, the outer
// polygon from above.  Shrink composes with erosion of G first, which is a
// subset of eroding the sum (exact for balls and half-spaces); grow uses
// the distance form dist(x - t*S, G) < r, which is exactly dilation.

class MinkowskiSet {
  public:
    MinkowskiSet(RegionSpec g, const ConvexShape& s, double t);

    double t() const { return t_; }
    const RegionSpec& region() const { return g_; }

    // x in G^0_r + t*inner  (subset of erode(G + t*S_inner, r)); r = 0 is
    // plain membership through the inner model.
    bool contains_shrunk(Vec2 x, double r = 0.0) const;
    // dist(x - t*outer, G) < r, i.e. x in dilate(G + t*S_outer, r); r = 0 is
    // plain membership through the outer model.
    bool contains_grown(Vec2 x, double r = 0.0) const;

    bool contains(Vec2 x) const { return contains_shrunk(x, 0.0); }

  private:
    struct Probe {
        Polygon poly;                 // vertices -t*v_i, counterclockwise
        std::vector<Vec2> normals;    // outward unit edge normals
        std::vector<double> pmin, pmax;  // vertex projection range per normal
        double mnx = 0, mxx = 0, mny = 0, mxy = 0;  // vertex bounding box
        double circum = 0.0;          // max vertex norm (prefilter radius)
    };
    bool probe_meets_shrunk(const Probe& p, Vec2 x, double r) const;
    bool probe_meets_grown(const Probe& p, Vec2 x, double r) const;

    RegionSpec g_;
    double t_ = 0.0;
    int dim_ = 2;
    Probe inner_, outer_;
};

// ---------------------------------------------------------------- mixed zone

struct MixedZoneResult {
    double measure = 0.0;       // violating-cell count times cell measure
    long long cells = 0;        // violating cells
    long long inside_low = 0;   // u < eta1 deep inside the reference set
    long long outside_high = 0; // u > eta0 well outside the reference set
    double cell_measure = 0.0;
};

// Scores u against the reference set G + t*S.  Cell centers are mapped to
// reference coordinates by xi = scale*x - shift before the membership tests
// (identity by default); the per-cell measure is (scale*h)^dim.  A cell
// violates if u < eta1 although xi lies in the band-eroded sum, or u > eta0
// although xi lies outside the band-dilated sum.  A positive window restricts
// the scan to |xi| <= window; cells outside are not scored (used when an
// unbounded region is truncated far away and the comparison is only valid
// near the origin).
MixedZoneResult mixed_zone(const Field& u, const RegionSpec& g, const ConvexShape& s, double t,
                           double band, double eta0, double eta1, double scale = 1.0,
                           Vec2 shift = Vec2{0.0, 0.0}, double window = 0.0);

}  // namespace kpplab
