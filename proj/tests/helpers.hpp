#pragma once
// Shared fixtures for the unit and acceptance suites: standard media and the
// three reference kernels exercised against the kernel validator.

#include <cmath>
#include <utility>
#include <vector>

#include "kpplab/medium.hpp"

namespace kpplab::testing {

inline MediumRealization homogeneous_1d(double a = 1.0, double fu0 = 1.0, double b = 0.0) {
    MediumParams p;
    p.kind = GeneratorKind::homogeneous;
    p.dim = 1;
    p.A.a11 = a;
    p.b = {b, 0.0};
    p.fu0 = fu0;
    return sample_medium(p, 1);
}

inline MediumRealization homogeneous_2d(double a = 1.0, double fu0 = 1.0) {
    MediumParams p;
    p.kind = GeneratorKind::homogeneous;
    p.dim = 2;
    p.A = {a, 0.0, a};
    p.fu0 = fu0;
    return sample_medium(p, 1);
}

inline MediumParams checkerboard_params_2d() {
    MediumParams p;
    p.kind = GeneratorKind::checkerboard;
    p.dim = 2;
    p.diffusion_law = {{}, 0.6, 1.4};
    p.fu0_law = {{}, 0.5, 1.5};
    p.mollify_radius = 0.2;
    p.time_amp_diffusion = 0.3;
    p.time_amp_fu0 = 0.5;
    return p;
}

inline MediumRealization checkerboard_2d(std::uint64_t seed = 11) {
    return sample_medium(checkerboard_params_2d(), seed);
}

inline MediumRealization checkerboard_1d(std::uint64_t seed = 11) {
    MediumParams p = checkerboard_params_2d();
    p.dim = 1;
    return sample_medium(p, seed);
}

// deterministic (t, x) sample cloud
inline std::vector<std::pair<double, Vec2>> tx_cloud(int dim, int n, std::uint64_t seed = 99) {
    std::vector<std::pair<double, Vec2>> out;
    RngStream rs(seed);
    for (int i = 0; i < n; ++i) {
        double t = rs.next_u01();
        Vec2 x{rs.next_in(-8.0, 8.0), dim == 2 ? rs.next_in(-8.0, 8.0) : 0.0};
        out.push_back({t, x});
    }
    return out;
}

inline std::vector<double> u_cloud() {
    std::vector<double> u;
    for (int i = 0; i <= 100; ++i) u.push_back(i / 100.0);
    u.push_back(1e-8);
    u.push_back(1.0 - 1e-8);
    return u;
}

// Reference kernel 1: the singular core env(r) = max(1, r^{-d-2+alpha}) on
// (0, alpha], K identical to it.  Saturates both envelope branches.
inline KernelSpec core_kernel(int dim, double alpha) {
    KernelSpec k;
    k.dim = dim;
    k.alpha = alpha;
    double expo = -(dim + 2) + alpha;
    k.envelope = [alpha, expo](double r) {
        return r > 0.0 && r <= alpha ? std::max(1.0, std::pow(r, expo)) : 0.0;
    };
    auto env = k.envelope;
    k.K = [env](double, Vec2, Vec2 nu) { return env(norm(nu)); };
    return k;
}

// Reference kernel 2: core on (0, alpha] plus a pure exponential tail
// e^{-r} beyond; the tail rides the max{env, e^{-alpha r}} branch.
inline KernelSpec tail_kernel(int dim, double alpha) {
    KernelSpec k = core_kernel(dim, alpha);
    auto env = k.envelope;
    k.K = [env, alpha](double, Vec2, Vec2 nu) {
        double r = norm(nu);
        return r <= alpha ? env(r) : std::exp(-r);
    };
    return k;
}

// Reference kernel 3: r^{-d-3} blow-up near zero, above the admissible
// singularity cap for every alpha <= 1.
inline KernelSpec oversingular_kernel(int dim, double alpha) {
    KernelSpec k = core_kernel(dim, alpha);
    k.K = [dim, alpha](double, Vec2, Vec2 nu) {
        double r = norm(nu);
        return r > 0.0 && r <= alpha ? std::pow(r, -(dim + 3)) : 0.0;
    };
    return k;
}

}  // namespace kpplab::testing
