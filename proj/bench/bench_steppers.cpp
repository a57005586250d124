// Throughput comparison of the serial reference drivers against the
// OpenMP-parallel ones, through the public stepper interface.  Both drivers
// share the per-cell update, so the outputs must match bitwise; the table
// reports cell updates per second and the parallel speedup.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "kpplab/solver.hpp"

using namespace kpplab;

namespace {

double time_steps(const TimeStepper& st, Field& u, Field& scratch, int steps, bool parallel) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < steps; ++i) {
        st.step(u, scratch, st.max_dt(), parallel);
        std::swap(u.values, scratch.values);
        u.time += st.max_dt();
    }
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

struct Row {
    std::string name;
    long long cells = 0;
    int steps = 0;
    double serial_s = 0.0;
    double parallel_s = 0.0;
    bool bitwise_equal = false;
};

Row bench_stepper(const std::string& name, const TimeStepper& st, int steps) {
    Row row;
    row.name = name;
    row.cells = st.grid().cell_count();
    row.steps = steps;

    Field u0 = ball_indicator(st.grid(), {0, 0}, 1.0, 0.5);
    Field scratch(st.grid());

    // warm both paths and check they produce the same bits
    Field a = u0, b = u0;
    st.step(u0, a, st.max_dt(), false);
    st.step(u0, b, st.max_dt(), true);
    row.bitwise_equal = a.values == b.values;

    Field us = u0;
    row.serial_s = time_steps(st, us, scratch, steps, false);
    Field up = u0;
    row.parallel_s = time_steps(st, up, scratch, steps, true);
    if (us.values != up.values) row.bitwise_equal = false;
    return row;
}

void print_row(const Row& r) {
    double work = static_cast<double>(r.cells) * r.steps;
    std::printf("%-18s %9lld %6d %9.3f %9.3f %10.1f %10.1f %7.2fx  %s\n", r.name.c_str(),
                r.cells, r.steps, r.serial_s, r.parallel_s, work / r.serial_s / 1e6,
                work / r.parallel_s / 1e6, r.serial_s / r.parallel_s,
                r.bitwise_equal ? "bitwise ok" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    double radius = 25.0;
    int steps = 40;
    int threads = 0;
    CLI::App app{"stepper throughput: serial reference vs OpenMP drivers"};
    app.add_option("--radius", radius, "half-width of the 2-D local benchmark domain");
    app.add_option("--steps", steps, "time steps per measurement");
    app.add_option("--threads", threads, "OpenMP team size (0 = runtime default)");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp disabled, parallel driver runs serially\n");
#endif

    MediumParams cp;
    cp.kind = GeneratorKind::checkerboard;
    cp.dim = 2;
    cp.diffusion_law = {{0.6, 1.4}, 1.0, 1.0};
    cp.fu0_law = {{0.5, 1.5}, 1.0, 1.0};
    cp.mollify_radius = 0.2;
    cp.time_amp_fu0 = 0.5;
    MediumRealization checker = sample_medium(cp, 11);

    MediumParams hp;
    hp.kind = GeneratorKind::homogeneous;
    hp.dim = 2;
    MediumRealization homog = sample_medium(hp, 1);

    std::printf("%-18s %9s %6s %9s %9s %10s %10s %8s\n", "case", "cells", "steps", "serial s",
                "omp s", "ser Mc/s", "omp Mc/s", "speedup");

    Grid g2 = Grid::covering_ball(2, {0, 0}, radius, 0.1);
    LocalStepper plane_checker(g2, checker);
    print_row(bench_stepper("local checker 2d", plane_checker, steps));

    LocalStepper plane_homog(g2, homog);
    print_row(bench_stepper("local uniform 2d", plane_homog, steps));

    MediumParams h1 = hp;
    h1.dim = 1;
    MediumRealization homog1 = sample_medium(h1, 1);
    Grid g1 = Grid::covering_ball(1, {0, 0}, radius * radius, 0.1);
    LocalStepper line(g1, homog1);
    print_row(bench_stepper("local uniform 1d", line, steps));

    KernelParams kp;
    kp.dim = 1;
    kp.alpha = 1.0;
    KernelSpec kern = make_checkerboard_kernel(kp, 11);
    Grid gn = Grid::covering_ball(1, {0, 0}, radius * 2.0, 0.1);
    NonlocalStepper jump(gn, kern, homog1);
    print_row(bench_stepper("nonlocal 1d", jump, steps));

    return 0;
}
