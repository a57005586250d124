#include "kpplab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "kpplab/solver.hpp"
#include "kpplab/wulff.hpp"

namespace kpplab {

namespace {

// Copies src into dst where the grids overlap; both share the h-lattice, so
// the index offset is exact.
void inject(const Field& src, Field& dst) {
    const Grid& gs = src.grid;
    const Grid& gd = dst.grid;
    long long offx = std::llround((gs.origin.x - gd.origin.x) / gd.h);
    long long offy = gd.dim == 2 ? std::llround((gs.origin.y - gd.origin.y) / gd.h) : 0;
    for (int iy = 0; iy < gs.ny; ++iy) {
        long long dy = iy + offy;
        if (dy < 0 || dy >= gd.ny) continue;
        for (int ix = 0; ix < gs.nx; ++ix) {
            long long dx = ix + offx;
            if (dx < 0 || dx >= gd.nx) continue;
            dst.at(static_cast<int>(dx), static_cast<int>(dy)) = src.at(ix, iy);
        }
    }
}

// Pointwise max of acc and src on the overlap (src is 0 elsewhere by the
// truncation convention, so cells outside the overlap keep their value).
void fold_max(Field& acc, const Field& src) {
    const Grid& gs = src.grid;
    const Grid& ga = acc.grid;
    long long offx = std::llround((gs.origin.x - ga.origin.x) / ga.h);
    long long offy = ga.dim == 2 ? std::llround((gs.origin.y - ga.origin.y) / ga.h) : 0;
    for (int iy = 0; iy < gs.ny; ++iy) {
        long long ay = iy + offy;
        if (ay < 0 || ay >= ga.ny) continue;
        for (int ix = 0; ix < gs.nx; ++ix) {
            long long ax = ix + offx;
            if (ax < 0 || ax >= ga.nx) continue;
            double v = src.at(ix, iy);
            double& dst = acc.at(static_cast<int>(ax), static_cast<int>(ay));
            if (v > dst) dst = v;
        }
    }
}

struct SupportBox {
    bool any = false;
    Vec2 lo{0.0, 0.0}, hi{0.0, 0.0};
};

SupportBox support_box(const Field& f) {
    SupportBox b;
    const Grid& g = f.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            if (f.at(ix, iy) == 0.0) continue;
            Vec2 c = g.center(ix, iy);
            if (!b.any) {
                b.any = true;
                b.lo = b.hi = c;
            } else {
                b.lo.x = std::min(b.lo.x, c.x);
                b.hi.x = std::max(b.hi.x, c.x);
                b.lo.y = std::min(b.lo.y, c.y);
                b.hi.y = std::max(b.hi.y, c.y);
            }
        }
    }
    return b;
}

// Runs fn with a growing domain radius; DomainTooSmall grows it 1.4x.
template <class Fn>
auto grow_on_failure(double base_r, int max_attempts, Fn&& fn) {
    for (int attempt = 1;; ++attempt) {
        try {
            return fn(base_r);
        } catch (const DomainTooSmall&) {
            if (attempt >= max_attempts) throw;
            base_r *= 1.4;
        }
    }
}

double corner_radius(int dim, Vec2 lo, Vec2 hi) {
    if (dim == 1) return std::max(std::fabs(lo.x), std::fabs(hi.x));
    double best = 0.0;
    for (double x : {lo.x, hi.x}) {
        for (double y : {lo.y, hi.y}) {
            best = std::max(best, norm(Vec2{x, y}));
        }
    }
    return best;
}

// Distance from the origin beyond which the region has no points.
double region_outer_radius(const RegionSpec& g) {
    switch (g.kind) {
        case RegionKind::ball:
            return norm(g.center) + g.radius;
        case RegionKind::box:
            return corner_radius(g.dim, g.lo, g.hi);
        case RegionKind::box_union: {
            double best = 0.0;
            for (const auto& [l, h] : g.boxes) best = std::max(best, corner_radius(g.dim, l, h));
            return best;
        }
        default:
            throw std::invalid_argument("region_outer_radius: unbounded region");
    }
}

}  // namespace

// ------------------------------------------------------- cube decomposition

std::vector<CubePiece> cube_decomposition(const Field& u0, int cap) {
    if (cap <= 0) throw std::invalid_argument("cube_decomposition: cap must be positive");
    const Grid& g = u0.grid;
    struct Bounds {
        int x0, x1, y0, y1;
    };
    std::map<std::pair<int, int>, Bounds> cubes;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            if (u0.at(ix, iy) == 0.0) continue;
            Vec2 c = g.center(ix, iy);
            int n1 = static_cast<int>(std::floor(c.x));
            int n2 = g.dim == 2 ? static_cast<int>(std::floor(c.y)) : 0;
            auto [it, fresh] = cubes.try_emplace({n1, n2}, Bounds{ix, ix, iy, iy});
            if (fresh && cubes.size() > static_cast<size_t>(cap)) {
                throw SolverError("cube_decomposition: more than " + std::to_string(cap) +
                                  " occupied cubes");
            }
            Bounds& b = it->second;
            b.x0 = std::min(b.x0, ix);
            b.x1 = std::max(b.x1, ix);
            b.y0 = std::min(b.y0, iy);
            b.y1 = std::max(b.y1, iy);
        }
    }
    std::vector<CubePiece> pieces;
    pieces.reserve(cubes.size());
    for (const auto& [key, b] : cubes) {
        CubePiece p;
        p.n1 = key.first;
        p.n2 = key.second;
        Grid pg;
        pg.dim = g.dim;
        pg.h = g.h;
        pg.origin = g.center(b.x0, b.y0);
        pg.nx = b.x1 - b.x0 + 1;
        pg.ny = b.y1 - b.y0 + 1;
        p.u = Field(pg, 0.0, u0.time);
        for (int iy = b.y0; iy <= b.y1; ++iy) {
            for (int ix = b.x0; ix <= b.x1; ++ix) {
                Vec2 c = g.center(ix, iy);
                if (static_cast<int>(std::floor(c.x)) != p.n1) continue;
                if (g.dim == 2 && static_cast<int>(std::floor(c.y)) != p.n2) continue;
                p.u.at(ix - b.x0, iy - b.y0) = u0.at(ix, iy);
            }
        }
        pieces.push_back(std::move(p));
    }
    return pieces;
}

// -------------------------------------------------- virtual linearity check

double SandwichReport::worst_phi_hat() const {
    double w = 0.0;
    for (const auto& s : times) w = std::max(w, s.phi_hat);
    return w;
}

SandwichReport virtual_linearity_check(const Field& u0, const MediumRealization& m,
                                       const std::vector<double>& times, double delta,
                                       const SandwichOptions& opt) {
    if (!(delta > 0.0 && delta <= 0.5)) {
        throw std::invalid_argument("virtual_linearity_check: delta must lie in (0, 1/2]");
    }
    if (times.empty()) throw std::invalid_argument("virtual_linearity_check: no times");
    for (size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || (i > 0 && times[i] <= times[i - 1])) {
            throw std::invalid_argument("virtual_linearity_check: times must be positive and increasing");
        }
    }
    if (u0.grid.dim != m.dim) {
        throw std::invalid_argument("virtual_linearity_check: dimension mismatch");
    }
    if (u0.time != 0.0) throw std::invalid_argument("virtual_linearity_check: u0 must start at t=0");

    SandwichReport rep;
    rep.delta = delta;
    for (double t : times) rep.times.push_back(SandwichTime{t, 0.0, 0.0, 0.0});

    SupportBox sup = support_box(u0);
    if (!sup.any) return rep;  // u stays 0 and there are no pieces

    std::vector<CubePiece> pieces = cube_decomposition(u0, opt.cube_cap);
    MediumRealization cutoff = kpp_surrogate(m);
    const double guess = speed_guess(m);
    const double h = u0.grid.h;
    const int dim = u0.grid.dim;
    const double t_last = times.back();

    // lower and upper envelope times, same expressions reused for matching
    std::vector<double> lo_times, hi_times;
    for (double t : times) {
        lo_times.push_back(t - delta * t);
        hi_times.push_back(t + delta * t);
    }

    // reference run
    Vec2 uc{0.5 * (sup.lo.x + sup.hi.x), 0.5 * (sup.lo.y + sup.hi.y)};
    double ur = 0.5 * norm(sup.hi - sup.lo);
    SolveResult uru = grow_on_failure(
        ur + guess * t_last + opt.boundary_pad, 3, [&](double r) {
            Grid g = Grid::covering_ball(dim, uc, r, h);
            Field w0(g, 0.0, 0.0);
            inject(u0, w0);
            LocalStepper st(g, m);
            SolveOptions so;
            so.observe_times = times;
            so.parallel = opt.parallel;
            so.boundary_tolerance = 1e-6;
            return solve(w0, st, t_last, so);
        });

    // envelopes max_n u'_n on the reference grid, one per requested time
    const Grid& scan = uru.final.grid;
    std::vector<Field> env_lo(times.size(), Field(scan));
    std::vector<Field> env_hi(times.size(), Field(scan));

    std::vector<double> piece_obs;
    piece_obs.insert(piece_obs.end(), lo_times.begin(), lo_times.end());
    piece_obs.insert(piece_obs.end(), hi_times.begin(), hi_times.end());
    std::sort(piece_obs.begin(), piece_obs.end());
    piece_obs.erase(std::unique(piece_obs.begin(), piece_obs.end()), piece_obs.end());

    for (const CubePiece& piece : pieces) {
        const Grid& pg = piece.u.grid;
        Vec2 phi = pg.center(pg.nx - 1, pg.ny - 1);
        Vec2 pc = (pg.origin + phi) * 0.5;
        double pr = 0.5 * norm(phi - pg.origin);
        SolveResult prr = grow_on_failure(
            pr + guess * hi_times.back() + opt.boundary_pad, 3, [&](double r) {
                Grid g = Grid::covering_ball(dim, pc, r, h);
                Field w0(g, 0.0, 0.0);
                inject(piece.u, w0);
                LocalStepper st(g, cutoff);
                SolveOptions so;
                so.observe_times = piece_obs;
                so.parallel = opt.parallel;
                so.boundary_tolerance = 1e-6;
                return solve(w0, st, hi_times.back(), so);
            });
        auto snap_at = [&](double t) -> const Field& {
            for (const Field& f : prr.snapshots) {
                if (f.time == t) return f;
            }
            throw SolverError("virtual_linearity_check: missing snapshot");
        };
        for (size_t j = 0; j < times.size(); ++j) {
            fold_max(env_lo[j], snap_at(lo_times[j]));
            fold_max(env_hi[j], snap_at(hi_times[j]));
        }
    }

    for (size_t j = 0; j < times.size(); ++j) {
        const Field& ut = uru.snapshots.at(j);
        double left = std::numeric_limits<double>::infinity();
        double right = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < ut.values.size(); ++i) {
            left = std::min(left, ut.values[i] - env_lo[j].values[i]);
            right = std::min(right, env_hi[j].values[i] - ut.values[i]);
        }
        rep.times[j].left_margin = left;
        rep.times[j].right_margin = right;
        rep.times[j].phi_hat = std::max(0.0, -std::min(left, right));
    }
    return rep;
}

// ------------------------------------------------------ homogenization sweep

SweepRecord homogenization_sweep(const MediumRealization& m, const SweepParams& p) {
    if (p.region.dim != m.dim || p.shape.dim != m.dim) {
        throw std::invalid_argument("homogenization_sweep: dimension mismatch");
    }
    if (p.eps_list.empty()) throw std::invalid_argument("homogenization_sweep: no eps");
    for (size_t i = 0; i < p.eps_list.size(); ++i) {
        if (!(p.eps_list[i] > 0.0) || (i > 0 && p.eps_list[i] >= p.eps_list[i - 1])) {
            throw std::invalid_argument("homogenization_sweep: eps must be positive and strictly decreasing");
        }
    }
    if (p.obs_times.empty()) throw std::invalid_argument("homogenization_sweep: no observation times");
    for (size_t i = 0; i < p.obs_times.size(); ++i) {
        if (p.obs_times[i] < 0.0 || (i > 0 && p.obs_times[i] <= p.obs_times[i - 1])) {
            throw std::invalid_argument("homogenization_sweep: observation times must be >= 0 and increasing");
        }
    }
    if (!(p.theta > 0.0 && p.theta <= 1.0)) {
        throw std::invalid_argument("homogenization_sweep: theta must lie in (0, 1]");
    }
    if (!p.shifts.empty() && p.shifts.size() != p.eps_list.size()) {
        throw std::invalid_argument("homogenization_sweep: one shift per eps");
    }
    if (!(p.h > 0.0)) throw std::invalid_argument("homogenization_sweep: h must be positive");

    MediumRealization cutoff;
    const MediumRealization* run_medium = &m;
    if (p.use_surrogate) {
        cutoff = kpp_surrogate(m);
        run_medium = &cutoff;
    }
    auto rho_fn = p.rho ? p.rho : [](double e) { return std::sqrt(e); };
    const double guess = speed_guess(m);
    const double t_last = p.obs_times.back();

    // unbounded regions: run from a far truncation, score near the origin
    double window = 0.0, trunc = 0.0;
    if (!p.region.bounded()) {
        double a = supersolution_rate(m);
        double M = t_last * p.shape.max_radial() + p.band + 2.0;
        window = M;
        trunc = (2.0 + 1.0 / a) * M;
    }
    const double r_scaled = p.region.bounded() ? region_outer_radius(p.region) : trunc;

    SweepRecord rec;
    rec.theta = p.theta;
    rec.band = p.band;
    rec.eta0 = p.eta0;
    rec.eta1 = p.eta1;

    for (size_t i = 0; i < p.eps_list.size(); ++i) {
        const double eps = p.eps_list[i];
        const Vec2 y = p.shifts.empty() ? Vec2{0.0, 0.0} : p.shifts[i];
        const double T = t_last / eps;

        std::vector<double> obs;
        for (double t : p.obs_times) obs.push_back(t / eps);

        SolveResult sr = grow_on_failure(
            (r_scaled + norm(y)) / eps + guess * T + 20.0, 3, [&](double r) {
                Grid g = Grid::covering_ball(m.dim, Vec2{0.0, 0.0}, r, p.h);
                Field u0(g, 0.0, 0.0);
                for (int iy = 0; iy < g.ny; ++iy) {
                    for (int ix = 0; ix < g.nx; ++ix) {
                        Vec2 xi = g.center(ix, iy) * eps - y;
                        if (trunc > 0.0 && dot(xi, xi) > trunc * trunc) continue;
                        if (p.region.contains(xi)) u0.at(ix, iy) = p.theta;
                    }
                }
                LocalStepper st(g, *run_medium);
                SolveOptions so;
                so.observe_times = obs;
                so.parallel = p.parallel;
                so.boundary_tolerance = 1e-6;
                return solve(u0, st, T, so);
            });

        EpsRecord er;
        er.eps = eps;
        er.rho = rho_fn(eps);
        er.shift = y;
        er.window = window;
        er.truncation = trunc;
        for (size_t j = 0; j < p.obs_times.size(); ++j) {
            SweepObservation ob;
            ob.time = p.obs_times[j];
            ob.zone = mixed_zone(sr.snapshots.at(j), p.region, p.shape, p.obs_times[j], p.band,
                                 p.eta0, p.eta1, eps, y, window);
            er.obs.push_back(ob);
        }
        rec.per_eps.push_back(std::move(er));
    }
    return rec;
}

// ------------------------------------------------------------- hair trigger

int hair_trigger_time(const MediumRealization& m, double theta, double eta,
                      const HairTriggerOptions& opt) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("hair_trigger_time: theta must lie in (0, 1]");
    }
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("hair_trigger_time: eta must lie in (0, 1)");
    }
    if (opt.horizon < 1) throw std::invalid_argument("hair_trigger_time: horizon must be >= 1");

    const double guess = speed_guess(m);
    const double level = 1.0 - eta;

    return grow_on_failure(1.0 + guess * std::min(opt.horizon, 10) + 16.0, 6, [&](double r) {
        Grid g = Grid::covering_ball(m.dim, Vec2{0.0, 0.0}, r, opt.h);
        std::vector<size_t> ball;
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                Vec2 c = g.center(ix, iy);
                if (dot(c, c) <= 1.0) ball.push_back(static_cast<size_t>(g.index(ix, iy)));
            }
        }
        Field u0 = ball_indicator(g, Vec2{0.0, 0.0}, 1.0, theta);
        LocalStepper st(g, m);

        int streak = -1;
        int tau = -1;
        SolveOptions so;
        so.parallel = opt.parallel;
        so.boundary_tolerance = 1e-6;
        so.integer_probe = [&](const Field& f) {
            int t = static_cast<int>(std::llround(f.time));
            bool above = true;
            for (size_t idx : ball) {
                if (f.values[idx] < level) {
                    above = false;
                    break;
                }
            }
            if (above) {
                if (streak < 0) streak = t;
                if (t - streak >= 1) {
                    tau = streak;
                    return false;
                }
            } else {
                streak = -1;
            }
            return true;
        };
        solve(u0, st, static_cast<double>(opt.horizon), so);
        if (tau < 0) {
            throw HorizonExceeded("hair_trigger_time: level 1-eta not held within horizon " +
                                  std::to_string(opt.horizon));
        }
        return tau;
    });
}

}  // namespace kpplab
