#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kpplab/experiments.hpp"

using namespace kpplab;
using namespace kpplab::testing;

namespace {

// level on cells whose center lies in [0,ext1) x [0,ext2)
Field box_data(const Grid& g, double ext1, double ext2, double level) {
    Field u0(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            Vec2 c = g.center(ix, iy);
            bool in = c.x >= 0.0 && c.x < ext1 &&
                      (g.dim == 1 || (c.y >= 0.0 && c.y < ext2));
            if (in) u0.at(ix, iy) = level;
        }
    }
    return u0;
}

}  // namespace

TEST_CASE("cube decomposition reproduces the field as sum and as max") {
    Grid g = Grid::covering_box(2, {-0.55, -0.55}, {2.35, 1.35}, 0.1);
    Field u0 = box_data(g, 2.0, 1.0, 0.5);
    auto pieces = cube_decomposition(u0);
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].n1 == 0);
    CHECK(pieces[0].n2 == 0);
    CHECK(pieces[1].n1 == 1);
    CHECK(pieces[1].n2 == 0);

    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            Vec2 c = g.center(ix, iy);
            double sum = 0.0, mx = 0.0;
            int holders = 0;
            for (const auto& p : pieces) {
                double v = p.u.value_at(c);
                sum += v;
                mx = std::max(mx, v);
                if (v != 0.0) ++holders;
            }
            CHECK(sum == u0.at(ix, iy));
            CHECK(mx == u0.at(ix, iy));
            CHECK(holders <= 1);  // disjoint supports
        }
    }
}

TEST_CASE("cube decomposition corner cases") {
    Grid g = Grid::covering_box(1, {-0.55, 0}, {2.35, 0}, 0.1);
    CHECK(cube_decomposition(Field(g)).empty());

    Field one_cube = box_data(g, 1.0, 0.0, 0.3);
    auto pieces = cube_decomposition(one_cube);
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].n1 == 0);

    Field two = box_data(g, 2.0, 0.0, 0.3);
    CHECK_THROWS_AS(cube_decomposition(two, 1), SolverError);
    CHECK_THROWS_AS(cube_decomposition(two, 0), std::invalid_argument);
}

TEST_CASE("virtual linearity margins: frozen homogeneous values") {
    MediumRealization m = homogeneous_1d();
    Grid g = Grid::covering_box(1, {0.0, 0}, {2.0, 0}, 0.1);
    Field u0 = box_data(g, 2.0, 0.0, 0.5);

    SandwichReport rep = virtual_linearity_check(u0, m, {5.0, 10.0}, 0.2);
    REQUIRE(rep.times.size() == 2);
    CHECK(rep.delta == 0.2);
    CHECK(rep.times[0].t == 5.0);
    CHECK(rep.times[0].phi_hat == doctest::Approx(0.013304563724728324).epsilon(1e-12));
    CHECK(rep.times[1].phi_hat == 0.0);
    CHECK(rep.worst_phi_hat() == doctest::Approx(0.013304563724728324).epsilon(1e-12));
    // phi_hat is exactly the negative part of the worse margin
    CHECK(std::min(rep.times[0].left_margin, rep.times[0].right_margin) ==
          doctest::Approx(-0.013304563724728324).epsilon(1e-12));
    CHECK(std::min(rep.times[1].left_margin, rep.times[1].right_margin) >= 0.0);
}

TEST_CASE("virtual linearity on zero data is exactly tight") {
    MediumRealization m = homogeneous_1d();
    Grid g = Grid::covering_box(1, {-0.55, 0}, {1.55, 0}, 0.1);
    SandwichReport rep = virtual_linearity_check(Field(g), m, {1.0}, 0.5);
    REQUIRE(rep.times.size() == 1);
    CHECK(rep.times[0].left_margin == 0.0);
    CHECK(rep.times[0].right_margin == 0.0);
    CHECK(rep.worst_phi_hat() == 0.0);
}

TEST_CASE("virtual linearity argument validation") {
    MediumRealization m = homogeneous_1d();
    Grid g = Grid::covering_box(1, {-0.55, 0}, {1.55, 0}, 0.1);
    Field u0 = box_data(g, 1.0, 0.0, 0.5);

    CHECK_THROWS_AS(virtual_linearity_check(u0, m, {1.0}, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(virtual_linearity_check(u0, m, {1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(virtual_linearity_check(u0, m, {}, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(virtual_linearity_check(u0, m, {2.0, 1.0}, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(virtual_linearity_check(u0, m, {-1.0}, 0.2), std::invalid_argument);

    MediumRealization m2 = homogeneous_2d();
    CHECK_THROWS_AS(virtual_linearity_check(u0, m2, {1.0}, 0.2), std::invalid_argument);

    Field late = u0;
    late.time = 1.0;
    CHECK_THROWS_AS(virtual_linearity_check(late, m, {2.0}, 0.2), std::invalid_argument);
}

TEST_CASE("homogenization sweep: frozen segment values") {
    MediumRealization m = homogeneous_1d();
    SweepParams sp;
    sp.region = RegionSpec::make_ball(1, {0, 0}, 2.0);
    sp.shape.dim = 1;
    sp.shape.dirs = {{1, 0}, {-1, 0}};
    sp.shape.w = {2.0, 2.0};
    sp.eps_list = {1.0, 0.5};
    sp.obs_times = {0.0, 1.0};
    sp.theta = 0.95;

    SweepRecord rec = homogenization_sweep(m, sp);
    REQUIRE(rec.per_eps.size() == 2);
    CHECK(rec.theta == 0.95);
    const EpsRecord& e1 = rec.per_eps[0];
    const EpsRecord& e2 = rec.per_eps[1];
    CHECK(e1.eps == 1.0);
    CHECK(e2.eps == 0.5);
    CHECK(e1.rho == 1.0);   // default collar sqrt(eps)
    CHECK(e2.rho == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    REQUIRE(e1.obs.size() == 2);
    REQUIRE(e2.obs.size() == 2);

    // the exact initial indicator violates nothing at t = 0
    CHECK(e1.obs[0].zone.cells == 0);
    CHECK(e2.obs[0].zone.cells == 0);

    CHECK(e1.obs[1].zone.cells == 83);
    CHECK(e1.obs[1].zone.measure == doctest::Approx(8.3).epsilon(1e-12));
    CHECK(e1.obs[1].zone.cell_measure == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(e2.obs[1].zone.cells == 101);
    CHECK(e2.obs[1].zone.measure == doctest::Approx(5.05).epsilon(1e-12));
    CHECK(e2.obs[1].zone.cell_measure == doctest::Approx(0.05).epsilon(1e-12));
    // the mixed zone shrinks along the eps ladder
    CHECK(e2.obs[1].zone.measure < e1.obs[1].zone.measure);
}

TEST_CASE("homogenization sweep argument validation") {
    MediumRealization m = homogeneous_1d();
    SweepParams sp;
    sp.region = RegionSpec::make_ball(1, {0, 0}, 2.0);
    sp.shape.dim = 1;
    sp.shape.dirs = {{1, 0}, {-1, 0}};
    sp.shape.w = {2.0, 2.0};
    sp.eps_list = {1.0, 0.5};
    sp.obs_times = {1.0};

    SweepParams bad = sp;
    bad.eps_list = {0.5, 1.0};
    CHECK_THROWS_AS(homogenization_sweep(m, bad), std::invalid_argument);
    bad = sp;
    bad.eps_list = {};
    CHECK_THROWS_AS(homogenization_sweep(m, bad), std::invalid_argument);
    bad = sp;
    bad.obs_times = {};
    CHECK_THROWS_AS(homogenization_sweep(m, bad), std::invalid_argument);
    bad = sp;
    bad.obs_times = {1.0, 1.0};
    CHECK_THROWS_AS(homogenization_sweep(m, bad), std::invalid_argument);
    bad = sp;
    bad.theta = 1.5;
    CHECK_THROWS_AS(homogenization_sweep(m, bad), std::invalid_argument);
    bad = sp;
    bad.shifts = {{0, 0}};  // one shift for two rungs
    CHECK_THROWS_AS(homogenization_sweep(m, bad), std::invalid_argument);
    bad = sp;
    bad.shape.dim = 2;
    CHECK_THROWS_AS(homogenization_sweep(m, bad), std::invalid_argument);
}

TEST_CASE("hair trigger clock: frozen values and monotonicity in theta") {
    MediumRealization m = homogeneous_1d();
    CHECK(hair_trigger_time(m, 1.0, 0.5) == 0);
    CHECK(hair_trigger_time(m, 0.25, 0.5) == 3);
    CHECK(hair_trigger_time(m, 0.05, 0.5) == 5);

    HairTriggerOptions tight;
    tight.horizon = 1;
    CHECK_THROWS_AS(hair_trigger_time(m, 0.05, 0.5, tight), HorizonExceeded);

    CHECK_THROWS_AS(hair_trigger_time(m, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(hair_trigger_time(m, 0.5, 1.0), std::invalid_argument);
    HairTriggerOptions zero;
    zero.horizon = 0;
    CHECK_THROWS_AS(hair_trigger_time(m, 0.5, 0.5, zero), std::invalid_argument);
}
