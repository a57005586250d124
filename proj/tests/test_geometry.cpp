#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kpplab/geometry.hpp"

using namespace kpplab;

namespace {

const double kSqrt2 = 1.4142135623730951;

// radial function of the ellipse x^2/4 + y^2 <= 1
ConvexShape ellipse_radial(int n_dirs) {
    ConvexShape s;
    s.dim = 2;
    s.dirs = direction_grid(2, n_dirs);
    for (Vec2 e : s.dirs) {
        s.w.push_back(1.0 / std::sqrt(e.x * e.x / 4.0 + e.y * e.y));
    }
    return s;
}

std::vector<Vec2> probe_cloud(double lo, double hi, double step) {
    std::vector<Vec2> pts;
    for (double x = lo; x <= hi; x += step) {
        for (double y = lo; y <= hi; y += step) pts.push_back({x, y});
    }
    return pts;
}

}  // namespace

TEST_CASE("direction grids") {
    auto d1 = direction_grid(1, 99);
    REQUIRE(d1.size() == 2);
    CHECK(d1[0] == Vec2{1.0, 0.0});
    CHECK(d1[1] == Vec2{-1.0, 0.0});

    auto d2 = direction_grid(2, 8);
    REQUIRE(d2.size() == 8);
    CHECK(d2[0].x == 1.0);
    CHECK(d2[0].y == 0.0);
    for (Vec2 e : d2) CHECK(norm(e) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d2[2].x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d2[2].y == doctest::Approx(1.0));

    CHECK_THROWS_AS(direction_grid(3, 8), std::invalid_argument);
    CHECK_THROWS_AS(direction_grid(2, 2), std::invalid_argument);
}

TEST_CASE("ball shape support and radial range") {
    ConvexShape b = ConvexShape::ball_shape(2, 2.0, 32);
    CHECK(b.min_radial() == 2.0);
    CHECK(b.max_radial() == 2.0);
    CHECK(b.consistent());
    CHECK(b.support({1.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-14));
    // a direction off the sample grid sees the inscribed hull
    Vec2 e{std::cos(0.1), std::sin(0.1)};
    CHECK(b.support(e) <= 2.0 + 1e-12);
    CHECK(b.support(e) >= 2.0 * std::cos(3.14159265358979 / 32.0) - 1e-12);

    ConvexShape seg = ConvexShape::ball_shape(1, 2.0, 0);
    CHECK(seg.support({1.0, 0.0}) == 2.0);
    CHECK(seg.support({-1.0, 0.0}) == 2.0);
}

TEST_CASE("diamond data: inner hull vs outer half-plane model") {
    ConvexShape s;
    s.dim = 2;
    s.dirs = direction_grid(2, 4);
    s.w = {1.0, 1.0, 1.0, 1.0};
    CHECK(s.consistent());

    Vec2 diag{1.0 / kSqrt2, 1.0 / kSqrt2};
    Polygon in = inner_polygon(s);
    Polygon out = outer_polygon(s);
    REQUIRE(in.pts.size() == 4);
    REQUIRE(out.pts.size() == 4);
    CHECK(polygon_support(in, diag) == doctest::Approx(1.0 / kSqrt2));
    CHECK(polygon_support(out, diag) == doctest::Approx(kSqrt2));

    CHECK(polygon_contains_point(out, {0.9, 0.9}));
    CHECK_FALSE(polygon_contains_point(in, {0.9, 0.9}));
    CHECK(polygon_contains_point(in, {0.2, 0.2}));
    CHECK(polygon_point_distance(in, {0.2, 0.2}) == 0.0);
    CHECK(polygon_point_distance(in, {1.0, 1.0}) == doctest::Approx(1.0 / kSqrt2));
    CHECK(polygon_point_distance(out, {2.0, 0.0}) == doctest::Approx(1.0));

    CHECK(shape_model_gap(s) == doctest::Approx(1.0 / kSqrt2).epsilon(1e-9));
}

TEST_CASE("ellipse radial samples: supports converge, data is not consistent") {
    ConvexShape s64 = ellipse_radial(64);
    CHECK(s64.support({1.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s64.support({0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s64.min_radial() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s64.max_radial() == doctest::Approx(2.0).epsilon(1e-12));
    // radial samples of an anisotropic body violate cross constraints:
    // the point 2*e1 sticks out of the half-plane at 45 degrees
    CHECK_FALSE(s64.consistent());

    ConvexShape s128 = ellipse_radial(128);
    CHECK(hausdorff_distance(s64, s128) < 0.02);
    CHECK(shape_model_gap(s128) < shape_model_gap(s64));
}

TEST_CASE("hausdorff distance of two balls is the radius gap") {
    ConvexShape a = ConvexShape::ball_shape(2, 2.0, 64);
    ConvexShape b = ConvexShape::ball_shape(2, 2.5, 64);
    CHECK(hausdorff_distance(a, b) == doctest::Approx(0.5).epsilon(1e-12));
    ConvexShape c = ConvexShape::ball_shape(1, 2.0, 0);
    CHECK_THROWS_AS(hausdorff_distance(a, c), std::invalid_argument);
}

TEST_CASE("shape_from_speeds: exact ball data and an outlier") {
    auto dirs = direction_grid(2, 16);
    std::vector<double> speeds(16, 2.0);
    ShapeFit fit = shape_from_speeds(2, dirs, speeds);
    CHECK(fit.convexity_defect <= 1e-12);
    CHECK(fit.shape.consistent());

    speeds[3] = 3.0;
    ShapeFit bumped = shape_from_speeds(2, dirs, speeds);
    CHECK(bumped.convexity_defect > 0.1);
    CHECK_FALSE(bumped.shape.consistent());

    ShapeFit seg = shape_from_speeds(1, direction_grid(1, 0), {2.0, 3.0});
    CHECK(seg.shape.support({1.0, 0.0}) == 2.0);
    CHECK(seg.shape.support({-1.0, 0.0}) == 3.0);
    CHECK(seg.convexity_defect <= 1e-12);

    CHECK_THROWS_AS(shape_from_speeds(2, dirs, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(shape_from_speeds(1, direction_grid(1, 0), {2.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("region signed distances") {
    RegionSpec ball = RegionSpec::make_ball(2, {0, 0}, 2.0);
    CHECK(ball.signed_distance({1.0, 0.0}) == -1.0);
    CHECK(ball.signed_distance({3.0, 0.0}) == 1.0);
    CHECK(ball.signed_distance({2.0, 0.0}) == 0.0);
    CHECK(ball.contains({1.9, 0.0}));
    CHECK_FALSE(ball.contains({2.0, 0.0}));  // open set

    RegionSpec box = RegionSpec::make_box(2, {0, 0}, {2.0, 1.0});
    CHECK(box.signed_distance({0.5, 0.5}) == -0.5);
    CHECK(box.signed_distance({1.0, 0.5}) == -0.5);
    CHECK(box.signed_distance({3.0, 0.5}) == 1.0);
    CHECK(box.signed_distance({3.0, 2.0}) == doctest::Approx(kSqrt2));

    RegionSpec seg = RegionSpec::make_box(1, {-1.0, 0}, {4.0, 0});
    CHECK(seg.signed_distance({0.0, 0.0}) == -1.0);
    CHECK(seg.signed_distance({5.0, 0.0}) == 1.0);

    RegionSpec half = RegionSpec::make_half_space(2, {2.0, 0.0}, 2.0);
    CHECK(half.signed_distance({0.0, 7.0}) == -2.0);
    CHECK(half.signed_distance({3.0, -4.0}) == 1.0);
    CHECK_FALSE(half.bounded());

    RegionSpec comp = RegionSpec::make_box_complement(2, {-1, -1}, {1, 1});
    CHECK(comp.signed_distance({0.0, 0.0}) == 1.0);
    CHECK(comp.signed_distance({2.0, 0.0}) == -1.0);
    CHECK(comp.signed_distance({1.0, 0.0}) == 0.0);

    RegionSpec uni = RegionSpec::make_box_union(
        2, {{{0, 0}, {2, 2}}, {{1, 1}, {3, 3}}});
    // overlap depth is the per-box minimum, conservative where boxes overlap
    CHECK(uni.signed_distance({1.5, 1.5}) == -0.5);
    CHECK(uni.signed_distance({4.0, 1.5}) == 1.0);
    CHECK(uni.contains({2.5, 2.5}));
    CHECK_FALSE(uni.contains({0.5, 2.5}));
}

TEST_CASE("erode and dilate membership") {
    RegionSpec ball = RegionSpec::make_ball(2, {0, 0}, 2.0);
    CHECK(erode_contains(ball, 0.5, {1.4, 0.0}));
    CHECK_FALSE(erode_contains(ball, 0.5, {1.6, 0.0}));
    CHECK(dilate_contains(ball, 0.5, {2.4, 0.0}));
    CHECK_FALSE(dilate_contains(ball, 0.5, {2.6, 0.0}));
    CHECK_FALSE(erode_contains(ball, 0.0, {2.0, 0.0}));  // r = 0 is the open set

    RegionSpec uni = RegionSpec::make_box_union(2, {{{0, 0}, {2, 2}}, {{1, 1}, {3, 3}}});
    for (Vec2 p : probe_cloud(-1.0, 4.0, 0.3)) {
        if (erode_contains(uni, 0.4, p)) CHECK(uni.contains(p));
        if (uni.contains(p)) CHECK(dilate_contains(uni, 0.4, p));
    }
}

TEST_CASE("minkowski sum at t = 0 is the region itself") {
    ConvexShape s = ConvexShape::ball_shape(2, 1.0, 32);
    for (const RegionSpec& g : {RegionSpec::make_ball(2, {0.5, 0}, 1.0),
                                RegionSpec::make_box(2, {-1, -1}, {1, 2}),
                                RegionSpec::make_half_space(2, {1, 0}, 0.5)}) {
        MinkowskiSet ms(g, s, 0.0);
        for (Vec2 p : probe_cloud(-2.0, 2.0, 0.21)) {
            CHECK(ms.contains_shrunk(p) == g.contains(p));
            CHECK(ms.contains_grown(p) == g.contains(p));
        }
    }
}

TEST_CASE("ball plus t times ball is the enlarged ball, up to the model gap") {
    RegionSpec g = RegionSpec::make_ball(2, {0, 0}, 1.0);
    ConvexShape s = ConvexShape::ball_shape(2, 1.0, 64);
    MinkowskiSet ms(g, s, 1.5);
    CHECK(ms.contains_shrunk({2.4, 0.0}));
    CHECK(ms.contains_shrunk({0.0, 0.0}));
    CHECK_FALSE(ms.contains_shrunk({2.52, 0.0}));
    CHECK(ms.contains_grown({2.45, 0.0}));
    CHECK_FALSE(ms.contains_grown({2.6, 0.0}));
    // the inner certificate implies the outer one
    for (Vec2 p : probe_cloud(-3.0, 3.0, 0.17)) {
        if (ms.contains_shrunk(p, 0.1)) CHECK(ms.contains_grown(p, 0.1));
        if (ms.contains_shrunk(p)) CHECK(ms.contains_grown(p));
    }
}

TEST_CASE("half space grows by t times the support in its normal") {
    RegionSpec g = RegionSpec::make_half_space(2, {1.0, 0.0}, 0.0);
    ConvexShape s = ConvexShape::ball_shape(2, 1.0, 64);
    MinkowskiSet ms(g, s, 2.0);
    CHECK(ms.contains_shrunk({1.9, 40.0}));
    CHECK_FALSE(ms.contains_grown({2.1, -40.0}));
    CHECK(ms.contains_shrunk({1.5, 0.0}, 0.3));
    CHECK_FALSE(ms.contains_shrunk({1.9, 0.0}, 0.3));
}

TEST_CASE("minkowski membership is monotone in t") {
    RegionSpec g = RegionSpec::make_box(2, {-1, -1}, {1, 1});
    ConvexShape s = ConvexShape::ball_shape(2, 1.0, 32);
    MinkowskiSet early(g, s, 0.5), late(g, s, 1.25);
    for (Vec2 p : probe_cloud(-3.0, 3.0, 0.19)) {
        if (early.contains_shrunk(p)) CHECK(late.contains_shrunk(p));
        if (early.contains_grown(p)) CHECK(late.contains_grown(p));
    }
    CHECK_THROWS_AS(MinkowskiSet(g, s, -1.0), std::invalid_argument);
}

TEST_CASE("mixed zone scores a field against the expanding set") {
    RegionSpec g = RegionSpec::make_ball(2, {0, 0}, 1.0);
    ConvexShape s = ConvexShape::ball_shape(2, 1.0, 64);
    Grid grid = Grid::covering_ball(2, {0, 0}, 3.0, 0.1);

    // the exact indicator of the grown set violates nothing
    Field exact = ball_indicator(grid, {0, 0}, 2.0, 1.0);
    MixedZoneResult clean = mixed_zone(exact, g, s, 1.0, 0.2, 0.1, 0.9);
    CHECK(clean.cells == 0);
    CHECK(clean.measure == 0.0);

    // u = 0 fails everywhere deep inside
    Field zero(grid, 0.0);
    MixedZoneResult low = mixed_zone(zero, g, s, 1.0, 0.2, 0.1, 0.9);
    CHECK(low.inside_low > 0);
    CHECK(low.outside_high == 0);
    CHECK(low.cells == low.inside_low);
    CHECK(low.cell_measure == doctest::Approx(0.01));
    CHECK(low.measure == doctest::Approx(low.cells * 0.01));
    CHECK(low.measure > 9.0);   // about the area of the eroded disk
    CHECK(low.measure < 11.0);

    // u = 1 fails well outside
    Field one(grid, 1.0);
    MixedZoneResult high = mixed_zone(one, g, s, 1.0, 0.2, 0.1, 0.9);
    CHECK(high.outside_high > 0);
    CHECK(high.inside_low == 0);

    // a window keeps the scan near the origin
    MixedZoneResult lw = mixed_zone(zero, g, s, 1.0, 0.2, 0.1, 0.9, 1.0, {0, 0}, 1.0);
    CHECK(lw.cells > 0);
    CHECK(lw.cells < low.cells);
    MixedZoneResult hw = mixed_zone(one, g, s, 1.0, 0.2, 0.1, 0.9, 1.0, {0, 0}, 1.0);
    CHECK(hw.cells == 0);

    CHECK_THROWS_AS(mixed_zone(zero, g, s, 1.0, 0.2, 0.9, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(mixed_zone(zero, g, s, 1.0, -0.2, 0.1, 0.9), std::invalid_argument);
}

TEST_CASE("mixed zone maps grid coordinates through scale and shift") {
    RegionSpec g = RegionSpec::make_ball(2, {0, 0}, 1.0);
    ConvexShape s = ConvexShape::ball_shape(2, 1.0, 64);
    // grid radius 1.5 at scale 2 covers reference radius 3
    Grid grid = Grid::covering_ball(2, {0, 0}, 1.5, 0.1);
    Field u = ball_indicator(grid, {0, 0}, 1.0, 1.0);  // xi-ball of radius 2
    MixedZoneResult r = mixed_zone(u, g, s, 1.0, 0.2, 0.1, 0.9, 2.0);
    CHECK(r.cells == 0);
    CHECK(r.cell_measure == doctest::Approx(0.04));

    Field zero(grid, 0.0);
    MixedZoneResult z = mixed_zone(zero, g, s, 1.0, 0.2, 0.1, 0.9, 2.0);
    CHECK(z.measure == doctest::Approx(z.cells * 0.04));
    CHECK(z.measure > 9.0);
    CHECK(z.measure < 11.0);
}
