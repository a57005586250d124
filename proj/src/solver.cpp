#include "kpplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace kpplab {

namespace {

void fill_planes_local(LocalPlanes& p, const Grid& g, const MediumRealization& m) {
    p.dim = g.dim;
    p.nx = g.nx;
    p.ny = g.ny;
    p.h = g.h;
    p.profile = m.profile();
    if (m.params.kind == GeneratorKind::homogeneous) {
        // constant coefficients: skip the plane storage entirely
        SymMat2 a = m.A_space({0.0, 0.0});
        Vec2 b = m.b_space({0.0, 0.0});
        p.uniform = true;
        p.ua11 = a.a11;
        p.ub1 = b.x;
        p.ufu0 = m.fu0_space({0.0, 0.0});
        if (g.dim == 2) {
            p.ua12 = a.a12;
            p.ua22 = a.a22;
            p.ub2 = b.y;
        }
        return;
    }
    long long n = g.cell_count();
    p.a11.resize(n);
    p.a12.assign(n, 0.0);
    p.a22.assign(n, 0.0);
    p.b1.resize(n);
    p.b2.assign(n, 0.0);
    p.fu0.resize(n);
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            long long idx = g.index(ix, iy);
            Vec2 x = m.shifted(g.center(ix, iy));
            SymMat2 a = m.A_space(x);
            Vec2 b = m.b_space(x);
            p.a11[idx] = a.a11;
            p.b1[idx] = b.x;
            p.fu0[idx] = m.fu0_space(x);
            if (g.dim == 2) {
                p.a12[idx] = a.a12;
                p.a22[idx] = a.a22;
                p.b2[idx] = b.y;
            }
        }
    }
}

}  // namespace

double cfl_dt(const Grid& g, const MediumRealization& m) {
    double denom = 2.0 * g.dim * m.sup_A / (g.h * g.h) + (m.sup_b1 + m.sup_b2) / g.h +
                   m.reaction_lipschitz();
    return 1.0 / denom;
}

LocalStepper::LocalStepper(const Grid& g, const MediumRealization& m)
    : grid_(g), medium_(&m) {
    if (g.dim != m.dim) throw std::invalid_argument("grid and medium dimension differ");
    fill_planes_local(planes_, g, m);
    planes_.detect_uniform();
    if (g.dim == 2) {
        if (planes_.uniform) {
            if (std::fabs(planes_.ua12) > std::min(planes_.ua11, planes_.ua22)) {
                throw SolverError("mixed-term positivity violated: |A12| > min(A11,A22)");
            }
        } else {
            for (long long i = 0; i < g.cell_count(); ++i) {
                if (std::fabs(planes_.a12[i]) > std::min(planes_.a11[i], planes_.a22[i])) {
                    throw SolverError("mixed-term positivity violated: |A12| > min(A11,A22)");
                }
            }
        }
    }
    cfl_ = cfl_dt(g, m);
}

void LocalStepper::step(const Field& in, Field& out, double dt, bool parallel) const {
    if (dt > cfl_ * (1.0 + 1e-9)) {
        throw SolverError("CFL violation: dt=" + format_double(dt) + " > " + format_double(cfl_));
    }
    LocalStepParams s;
    s.dt = dt;
    double t = in.time;
    s.mod_a = medium_->mod_diffusion(t);
    s.mod_b = medium_->mod_drift(t);
    s.mod_f = medium_->mod_fu0(t);
    if (parallel) {
        local_step_parallel(planes_, in.values.data(), out.values.data(), s);
    } else {
        local_step_serial(planes_, in.values.data(), out.values.data(), s);
    }
    out.time = in.time + dt;
}

NonlocalStepper::NonlocalStepper(const Grid& g, const KernelSpec& k,
                                 const MediumRealization& reaction_medium,
                                 const NonlocalOptions& opt)
    : grid_(g), medium_(&reaction_medium), kernel_(&k) {
    if (g.dim != k.dim) throw std::invalid_argument("grid and kernel dimension differ");
    if (!k.separable) throw std::invalid_argument("nonlocal stepper requires a separable kernel");
    tail_radius_ = k.has_tail ? std::log(1.0 / opt.tail_tolerance) / k.alpha : k.alpha;

    tables_.dim = g.dim;
    tables_.nx = g.nx;
    tables_.ny = g.ny;
    tables_.h = g.h;
    tables_.profile = reaction_medium.profile();

    int reach = static_cast<int>(std::floor(tail_radius_ / g.h));
    double hd = g.dim == 2 ? g.h * g.h : g.h;
    // half-space offsets (lexicographically positive); the even pairing
    // u(x+nu) + u(x-nu) - 2u(x) in the step covers the mirror half
    for (int oy = (g.dim == 2 ? -reach : 0); oy <= (g.dim == 2 ? reach : 0); ++oy) {
        for (int ox = -reach; ox <= reach; ++ox) {
            if (oy < 0 || (oy == 0 && ox <= 0)) continue;
            double r = g.h * std::sqrt(static_cast<double>(ox) * ox + static_cast<double>(oy) * oy);
            if (r > tail_radius_) continue;
            double w = k.radial(r) * hd;
            if (w <= 0.0) continue;
            tables_.off_x.push_back(ox);
            tables_.off_y.push_back(oy);
            tables_.base.push_back(w);
        }
    }

    long long n = g.cell_count();
    tables_.amp.resize(n);
    tables_.fu0.resize(n);
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            long long idx = g.index(ix, iy);
            Vec2 x = reaction_medium.shifted(g.center(ix, iy));
            // modulation is exactly 1 at t = 0, so this is the spatial factor
            tables_.amp[idx] = k.amp(0.0, x);
            tables_.fu0[idx] = reaction_medium.fu0_space(x);
        }
    }
    tables_.detect_uniform();

    double wsum = 0.0;
    for (double b : tables_.base) wsum += b;
    double denom = k.amp_sup * 2.0 * wsum + reaction_medium.reaction_lipschitz();
    cfl_ = 1.0 / denom;
}

void NonlocalStepper::step(const Field& in, Field& out, double dt, bool parallel) const {
    if (dt > cfl_ * (1.0 + 1e-9)) {
        throw SolverError("CFL violation: dt=" + format_double(dt) + " > " + format_double(cfl_));
    }
    NonlocalStepParams s;
    s.dt = dt;
    s.mod_amp = time_modulation(kernel_->time_amp, in.time);
    s.mod_f = medium_->mod_fu0(in.time);
    if (parallel) {
        nonlocal_step_parallel(tables_, in.values.data(), out.values.data(), s);
    } else {
        nonlocal_step_serial(tables_, in.values.data(), out.values.data(), s);
    }
    out.time = in.time + dt;
}

double NonlocalStepper::speed_bound(Vec2 e) const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 400; ++i) {
        double beta = 0.02 * i;
        double sum = 0.0;
        for (size_t k = 0; k < tables_.base.size(); ++k) {
            double nd = grid_.h * (tables_.off_x[k] * e.x + tables_.off_y[k] * e.y);
            sum += tables_.base[k] * 2.0 * (std::cosh(beta * nd) - 1.0);
        }
        double c = (kernel_->amp_sup * sum + medium_->sup_fu0) / beta;
        best = std::min(best, c);
    }
    return best;
}

Field step_local(const Field& u, const MediumRealization& m, double dt) {
    LocalStepper st(u.grid, m);
    Field out(u.grid);
    st.step(u, out, dt, true);
    return out;
}

Field step_nonlocal(const Field& u, const KernelSpec& k, const MediumRealization& reaction_medium,
                    double dt) {
    NonlocalStepper st(u.grid, k, reaction_medium);
    Field out(u.grid);
    st.step(u, out, dt, true);
    return out;
}

SolveResult solve(const Field& u0, const TimeStepper& stepper, double T, const SolveOptions& opt) {
    if (T < u0.time) throw std::invalid_argument("solve: T precedes the initial time");
    SolveResult res;
    res.final = u0;

    auto probe = [&](const Field& f) -> bool {
        if (opt.boundary_tolerance >= 0.0 && f.boundary_max() > opt.boundary_tolerance) {
            throw DomainTooSmall("boundary activity " + format_double(f.boundary_max()) +
                                 " at t=" + format_double(f.time));
        }
        if (opt.integer_probe && f.time == std::floor(f.time)) return opt.integer_probe(f);
        return true;
    };
    if (!probe(res.final)) return res;

    // landing points: integers, observation times, T
    std::set<double> landings;
    for (double t = std::floor(u0.time) + 1.0; t < T; t += 1.0) {
        if (t > u0.time) landings.insert(t);
    }
    for (double t : opt.observe_times) {
        if (t > u0.time && t <= T) landings.insert(t);
    }
    if (T > u0.time) landings.insert(T);

    std::set<double> observed(opt.observe_times.begin(), opt.observe_times.end());
    if (observed.count(u0.time)) res.snapshots.push_back(u0);

    Field scratch(stepper.grid());
    double dt_max = stepper.max_dt();
    double seg_start = u0.time;
    for (double seg_end : landings) {
        double len = seg_end - seg_start;
        int n = std::max(1, static_cast<int>(std::ceil(len / dt_max - 1e-12)));
        double dt = len / n;
        for (int k = 0; k < n; ++k) {
            res.final.time = seg_start + k * dt;  // exact restartable times
            stepper.step(res.final, scratch, dt, opt.parallel);
            std::swap(res.final.values, scratch.values);
        }
        res.final.time = seg_end;
        bool keep_going = probe(res.final);
        if (observed.count(seg_end)) res.snapshots.push_back(res.final);
        if (!keep_going) return res;
        seg_start = seg_end;
    }
    return res;
}

double supersolution_rate(const MediumRealization& m) {
    double gamma = std::max({m.sup_A, m.sup_b1, m.sup_b2, m.sup_fu0});
    return gamma * (1.0 + m.dim + m.dim * m.dim);
}

double truncation_radius(double r0, double T, const MediumRealization& m, double tail_tolerance) {
    return r0 + supersolution_rate(m) * T + std::log(1.0 / tail_tolerance);
}

SupersolutionReport supersolution_check(const std::vector<Field>& snapshots, Vec2 e, Vec2 x0,
                                        double a, double tol) {
    SupersolutionReport rep;
    rep.worst_excess = -std::numeric_limits<double>::infinity();
    for (const Field& f : snapshots) {
        const Grid& g = f.grid;
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                Vec2 x = g.center(ix, iy);
                double bound = std::exp(a * f.time - dot(x - x0, e));
                double excess = f.at(ix, iy) - bound;
                if (excess > rep.worst_excess) {
                    rep.worst_excess = excess;
                    rep.at_time = f.time;
                }
            }
        }
    }
    rep.pass = rep.worst_excess <= tol;
    return rep;
}

}  // namespace kpplab
