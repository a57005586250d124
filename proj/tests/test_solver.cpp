#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kpplab/solver.hpp"

using namespace kpplab;
using namespace kpplab::testing;

namespace {

Field random_field(const Grid& g, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    Field f(g);
    RngStream rng(seed);
    for (auto& v : f.values) v = rng.next_in(lo, hi);
    return f;
}

// u <= v pointwise by construction (scaling by a factor in [0,1]).
std::pair<Field, Field> ordered_pair(const Grid& g, std::uint64_t seed) {
    Field v = random_field(g, seed);
    Field u = v;
    RngStream rng(seed ^ 0x5151u);
    for (auto& w : u.values) w *= rng.next_u01();
    return {u, v};
}

}  // namespace

TEST_CASE("cfl bound matches the stability arithmetic") {
    Grid g1 = Grid::covering_ball(1, {0, 0}, 2.0, 0.1);
    MediumRealization m1 = homogeneous_1d();
    CHECK(cfl_dt(g1, m1) == doctest::Approx(1.0 / 201.0).epsilon(1e-12));

    Grid g2 = Grid::covering_ball(2, {0, 0}, 2.0, 0.1);
    MediumRealization m2 = homogeneous_2d();
    m2.params.b = {1.0, 0.0};
    MediumRealization mb = sample_medium(m2.params, 0);
    CHECK(cfl_dt(g2, mb) == doctest::Approx(1.0 / 411.0).epsilon(1e-12));

    // coarsening relaxes the bound, at most by the diffusion factor 4
    Grid g1c = Grid::covering_ball(1, {0, 0}, 2.0, 0.2);
    double dt_f = cfl_dt(g1, m1), dt_c = cfl_dt(g1c, m1);
    CHECK(dt_c >= dt_f);
    CHECK(dt_c <= 4.0 * dt_f);
}

TEST_CASE("0 and 1 are exact fixed points of both steppers") {
    MediumRealization m = checkerboard_2d(5);
    Grid g = Grid::covering_ball(2, {0, 0}, 2.0, 0.2);
    LocalStepper loc(g, m);

    MediumRealization ms = kpp_surrogate(m);
    LocalStepper locs(g, ms);

    KernelParams kp;
    kp.dim = 2;
    kp.alpha = 1.0;
    KernelSpec k = make_checkerboard_kernel(kp, 5);
    NonlocalStepper nl(g, k, m);

    const TimeStepper* steppers[] = {&loc, &locs, &nl};
    for (const TimeStepper* st : steppers) {
        for (double level : {0.0, 1.0}) {
            Field u(g, level), out(g);
            for (int i = 0; i < 200; ++i) {
                st->step(u, out, st->max_dt(), false);
                std::swap(u.values, out.values);
                u.time += st->max_dt();
            }
            CHECK(u.min_value() == level);
            CHECK(u.max_value() == level);
        }
    }
}

TEST_CASE("steppers preserve ordering of solutions") {
    MediumRealization m = checkerboard_2d(9);
    Grid g = Grid::covering_ball(2, {0, 0}, 2.0, 0.2);
    LocalStepper loc(g, m);
    KernelParams kp;
    kp.dim = 2;
    KernelSpec k = make_checkerboard_kernel(kp, 9);
    NonlocalStepper nl(g, k, m);

    for (const TimeStepper* st : {(const TimeStepper*)&loc, (const TimeStepper*)&nl}) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            auto [u, v] = ordered_pair(g, 100 + s);
            Field un(g), vn(g);
            st->step(u, un, st->max_dt(), false);
            st->step(v, vn, st->max_dt(), false);
            double worst = 0.0;
            for (size_t i = 0; i < un.values.size(); ++i) {
                worst = std::max(worst, un.values[i] - vn.values[i]);
            }
            CHECK(worst <= 1e-12);
        }
    }
}

TEST_CASE("steppers keep values inside [0,1]") {
    MediumRealization m = checkerboard_1d(3);
    Grid g = Grid::covering_ball(1, {0, 0}, 5.0, 0.1);
    LocalStepper st(g, m);
    Field u = random_field(g, 77);
    Field out(g);
    for (int i = 0; i < 100; ++i) {
        st.step(u, out, st.max_dt(), false);
        std::swap(u.values, out.values);
        u.time += st.max_dt();
    }
    CHECK(u.min_value() >= 0.0);
    CHECK(u.max_value() <= 1.0);
}

TEST_CASE("solve with T = t0 returns the data unchanged") {
    MediumRealization m = homogeneous_1d();
    Grid g = Grid::covering_ball(1, {0, 0}, 3.0, 0.1);
    LocalStepper st(g, m);
    Field u0 = ball_indicator(g, {0, 0}, 1.0, 0.5);
    SolveResult r = solve(u0, st, 0.0);
    CHECK(r.final.time == 0.0);
    CHECK(r.final.values == u0.values);
}

TEST_CASE("a run restarted at a landing time reproduces the original bit for bit") {
    MediumRealization m = checkerboard_1d(8);
    Grid g = Grid::covering_ball(1, {0, 0}, 4.0, 0.1);
    LocalStepper st(g, m);
    Field u0 = ball_indicator(g, {0, 0}, 1.0, 0.5);

    SolveOptions opt;
    opt.observe_times = {0.7};
    opt.parallel = false;
    SolveResult whole = solve(u0, st, 1.5, opt);
    REQUIRE(whole.snapshots.size() == 1);
    CHECK(whole.snapshots[0].time == 0.7);

    SolveOptions plain;
    plain.parallel = false;
    SolveResult first = solve(u0, st, 0.7, plain);
    CHECK(first.final.values == whole.snapshots[0].values);
    SolveResult second = solve(first.final, st, 1.5, plain);
    CHECK(second.final.time == 1.5);
    CHECK(second.final.values == whole.final.values);
}

TEST_CASE("landing times are assigned exactly") {
    MediumRealization m = homogeneous_2d();
    Grid g = Grid::covering_ball(2, {0, 0}, 1.5, 0.25);
    LocalStepper st(g, m);
    Field u0 = ball_indicator(g, {0, 0}, 0.5, 0.3);
    SolveOptions opt;
    opt.observe_times = {0.25, 1.0 / 3.0, 2.5};
    opt.parallel = false;
    SolveResult r = solve(u0, st, 3.1, opt);
    REQUIRE(r.snapshots.size() == 3);
    CHECK(r.snapshots[0].time == 0.25);
    CHECK(r.snapshots[1].time == 1.0 / 3.0);
    CHECK(r.snapshots[2].time == 2.5);
    CHECK(r.final.time == 3.1);
}

TEST_CASE("parallel and serial drivers agree bitwise") {
    MediumRealization m = checkerboard_2d(14);
    Grid g = Grid::covering_ball(2, {0, 0}, 3.0, 0.2);
    LocalStepper st(g, m);
    Field u = random_field(g, 21);
    Field a(g), b(g);
    st.step(u, a, st.max_dt(), false);
    st.step(u, b, st.max_dt(), true);
    CHECK(a.values == b.values);

    KernelParams kp;
    kp.dim = 2;
    KernelSpec k = make_checkerboard_kernel(kp, 14);
    NonlocalStepper nl(g, k, m);
    Field c(g), d(g);
    nl.step(u, c, nl.max_dt(), false);
    nl.step(u, d, nl.max_dt(), true);
    CHECK(c.values == d.values);
}

TEST_CASE("supersolution rate and truncation radius arithmetic") {
    // gamma = 1: rate = 1 + d + d^2
    CHECK(supersolution_rate(homogeneous_1d()) == 3.0);
    CHECK(supersolution_rate(homogeneous_2d()) == 7.0);
    MediumRealization fast = homogeneous_1d(1.0, 16.0);
    CHECK(supersolution_rate(fast) == 48.0);

    MediumRealization m2 = homogeneous_2d();
    CHECK(truncation_radius(5.0, 2.0, m2) ==
          doctest::Approx(5.0 + 14.0 + std::log(1e8)).epsilon(1e-12));
    // stricter tail tolerance widens the margin
    CHECK(truncation_radius(5.0, 2.0, m2, 1e-12) > truncation_radius(5.0, 2.0, m2, 1e-8));
}

TEST_CASE("plane-wave supersolution bound holds at the module rate and fails below it") {
    MediumRealization m = homogeneous_1d();
    Grid g = Grid::covering_ball(1, {0, 0}, 12.0, 0.1);
    LocalStepper st(g, m);
    Field u0 = ball_indicator(g, {0, 0}, 1.0, 0.5);
    SolveOptions opt;
    opt.observe_times = {1.0, 2.0};
    opt.parallel = false;
    SolveResult r = solve(u0, st, 2.0, opt);

    double a = supersolution_rate(m);
    SupersolutionReport good = supersolution_check(r.snapshots, {1.0, 0.0}, {1.0, 0.0}, a);
    CHECK(good.pass);

    // an absurdly small rate cannot dominate the moving front
    SupersolutionReport bad = supersolution_check(r.snapshots, {1.0, 0.0}, {-3.0, 0.0}, 0.05);
    CHECK_FALSE(bad.pass);
    CHECK(bad.worst_excess > 0.0);
}

TEST_CASE("truncation does not contaminate the interior") {
    MediumRealization m = homogeneous_1d();
    Field small_u, big_u;
    for (double radius : {10.0, 20.0}) {
        Grid g = Grid::covering_ball(1, {0, 0}, radius, 0.1);
        LocalStepper st(g, m);
        Field u0 = ball_indicator(g, {0, 0}, 1.0, 1.0);
        SolveOptions opt;
        opt.parallel = false;
        Field out = solve(u0, st, 1.0, opt).final;
        (radius < 15.0 ? small_u : big_u) = out;
    }
    double worst = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.1) {
        worst = std::max(worst,
                         std::fabs(small_u.value_at({x, 0}) - big_u.value_at({x, 0})));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("nonlocal tables resolve the envelope tail") {
    MediumRealization m = homogeneous_1d();
    Grid g = Grid::covering_ball(1, {0, 0}, 3.0, 0.1);
    KernelParams kp;
    kp.dim = 1;
    kp.alpha = 1.0;
    kp.tail = true;
    KernelSpec k = make_checkerboard_kernel(kp, 2);
    NonlocalStepper st(g, k, m, {1e-8});
    CHECK(st.tail_radius() >= std::log(1e8));
    double bound = st.speed_bound({1.0, 0.0});
    CHECK(bound > 0.0);
    CHECK(std::isfinite(bound));
}

TEST_CASE("small data ignites to 1 at the origin") {
    MediumRealization m = homogeneous_1d();
    Grid g = Grid::covering_ball(1, {0, 0}, 40.0, 0.1);
    LocalStepper st(g, m);
    Field u0 = ball_indicator(g, {0, 0}, 0.5, 0.01);
    SolveOptions opt;
    opt.parallel = false;
    Field out = solve(u0, st, 15.0, opt).final;
    CHECK(out.value_at({0, 0}) > 0.999);
}
