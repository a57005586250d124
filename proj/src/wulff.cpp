#include "kpplab/wulff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace kpplab {

namespace {

// Cells whose center lies in the closed ball B_r(z).  Throws if the ball is
// not fully covered by the grid: a silently clipped target would weaken the
// occupation test.
std::vector<long long> cells_in_ball(const Grid& g, Vec2 z, double r) {
    const double tol = 1e-9;
    double x_lo = g.origin.x, x_hi = g.origin.x + g.h * (g.nx - 1);
    if (z.x - r < x_lo - tol || z.x + r > x_hi + tol) {
        throw SolverError("target ball at (" + format_double(z.x) + "," + format_double(z.y) +
                          ") not covered by the solver domain");
    }
    int ix0 = std::max(0, static_cast<int>(std::floor((z.x - r - g.origin.x) / g.h)));
    int ix1 = std::min(g.nx - 1, static_cast<int>(std::ceil((z.x + r - g.origin.x) / g.h)));
    std::vector<long long> out;
    if (g.dim == 1) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            if (std::fabs(g.center(ix, 0).x - z.x) <= r) out.push_back(g.index(ix, 0));
        }
        return out;
    }
    double y_lo = g.origin.y, y_hi = g.origin.y + g.h * (g.ny - 1);
    if (z.y - r < y_lo - tol || z.y + r > y_hi + tol) {
        throw SolverError("target ball at (" + format_double(z.x) + "," + format_double(z.y) +
                          ") not covered by the solver domain");
    }
    int iy0 = std::max(0, static_cast<int>(std::floor((z.y - r - g.origin.y) / g.h)));
    int iy1 = std::min(g.ny - 1, static_cast<int>(std::ceil((z.y + r - g.origin.y) / g.h)));
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            Vec2 d = g.center(ix, iy) - z;
            if (dot(d, d) <= r * r) out.push_back(g.index(ix, iy));
        }
    }
    return out;
}

struct Monitor {
    Vec2 z;
    std::vector<long long> cells;
    int streak = -1;  // start of the current all-above run of integer times
    int tau = kUnresolved;
};

// One source, all targets, one solve.  The integer-time probe advances a
// persistence streak per target and stops the run once every target has
// resolved.  On boundary activity the domain is regrown and the campaign
// rerun (deterministically), unless the caller pinned the radius.
std::vector<int> run_source(const MediumRealization& m, Vec2 y, const std::vector<Vec2>& targets,
                            const PassageOptions& opt) {
    double maxdist = 1.0;
    for (Vec2 z : targets) maxdist = std::max(maxdist, norm(z - y));
    double base_r = opt.domain_radius;
    bool fixed = base_r > 0.0;
    if (!fixed) base_r = maxdist + 1.0 + speed_guess(m) * (opt.window + 4.0) + 18.0;

    for (int attempt = 0;; ++attempt) {
        Grid g = Grid::covering_ball(m.dim, y, base_r, opt.h);
        std::vector<Monitor> mon(targets.size());
        for (size_t i = 0; i < targets.size(); ++i) {
            mon[i].z = targets[i];
            mon[i].cells = cells_in_ball(g, targets[i], 1.0);
        }
        LocalStepper st(g, m);
        Field u0 = ball_indicator(g, y, 1.0, opt.level);

        size_t unresolved = mon.size();
        SolveOptions so;
        so.parallel = opt.parallel;
        so.boundary_tolerance = opt.boundary_tolerance;
        so.integer_probe = [&](const Field& f) -> bool {
            int t = static_cast<int>(std::llround(f.time));
            for (Monitor& tm : mon) {
                if (tm.tau != kUnresolved) continue;
                bool above = true;
                for (long long idx : tm.cells) {
                    if (f.values[static_cast<size_t>(idx)] < opt.level) {
                        above = false;
                        break;
                    }
                }
                if (above) {
                    if (tm.streak < 0) tm.streak = t;
                    if (t - tm.streak >= opt.window) {
                        tm.tau = tm.streak;
                        --unresolved;
                    }
                } else {
                    tm.streak = -1;
                }
            }
            return unresolved > 0;
        };

        try {
            solve(u0, st, static_cast<double>(opt.horizon), so);
            std::vector<int> taus(mon.size());
            for (size_t i = 0; i < mon.size(); ++i) taus[i] = mon[i].tau;
            return taus;
        } catch (const DomainTooSmall&) {
            if (fixed || attempt >= 3) throw;
            base_r *= 1.4;
        }
    }
}

double richardson(const std::vector<int>& ladder, const std::vector<double>& values) {
    size_t k = ladder.size();
    double n1 = ladder[k - 2], n2 = ladder[k - 1];
    double v1 = values[k - 2], v2 = values[k - 1];
    return (n2 * v2 - n1 * v1) / (n2 - n1);
}

void check_ladder(const std::vector<int>& ladder) {
    if (ladder.size() < 2) throw std::invalid_argument("ladder needs at least two rungs");
    for (size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] <= 0) throw std::invalid_argument("ladder rungs must be positive");
        if (i > 0 && ladder[i] <= ladder[i - 1]) {
            throw std::invalid_argument("ladder rungs must increase");
        }
    }
}

Vec2 unit(Vec2 e) {
    double n = norm(e);
    if (n <= 0.0) throw std::invalid_argument("zero direction");
    return {e.x / n, e.y / n};
}

}  // namespace

int PassageTimeTable::find(Vec2 y, Vec2 z, double tol) const {
    for (size_t i = 0; i < entries.size(); ++i) {
        if (norm(entries[i].source - y) <= tol && norm(entries[i].target - z) <= tol) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

int PassageTimeTable::tau_of(Vec2 y, Vec2 z) const {
    int i = find(y, z);
    if (i < 0) {
        throw SolverError("passage table has no entry (" + format_double(y.x) + "," +
                          format_double(y.y) + ") -> (" + format_double(z.x) + "," +
                          format_double(z.y) + ")");
    }
    return entries[static_cast<size_t>(i)].tau;
}

double speed_guess(const MediumRealization& m) {
    // sup over (t,x,e) of e.A(t,x)e; the generators modulate a fixed spatial
    // field by a factor <= 1, so the homogeneous case is the one matrix and
    // the random generators are scalar with sup sup_A
    double lam = m.sup_A;
    if (m.params.kind == GeneratorKind::homogeneous) {
        const SymMat2& a = m.params.A;
        if (m.dim == 1) {
            lam = a.a11;
        } else {
            double mid = 0.5 * (a.a11 + a.a22);
            double off = 0.5 * (a.a11 - a.a22);
            lam = mid + std::sqrt(off * off + a.a12 * a.a12);
        }
    }
    // 2 sqrt(lam fu0) + |b.e| bounds the level-set speed; the factors absorb
    // the cosh/exp inflation of the discrete stencil at mu*h up to ~0.3
    return 2.05 * std::sqrt(lam * m.sup_fu0) + 1.15 * (m.sup_b1 + m.sup_b2);
}

PassageTimeTable measure_passage(const MediumRealization& m, const std::vector<Vec2>& sources,
                                 const std::vector<Vec2>& targets, const PassageOptions& opt) {
    if (sources.empty() || targets.empty()) {
        throw std::invalid_argument("measure_passage needs sources and targets");
    }
    if (opt.window < 0 || opt.horizon < opt.window) {
        throw std::invalid_argument("horizon must cover the persistence window");
    }
    if (!(opt.level > 0.0 && opt.level < 1.0)) {
        throw std::invalid_argument("occupation level must lie in (0,1)");
    }

    PassageTimeTable table;
    table.dim = m.dim;
    table.seed = m.seed;
    table.horizon = opt.horizon;
    table.window = opt.window;

    // one campaign per distinct source; duplicates reuse the first result
    for (size_t i = 0; i < sources.size(); ++i) {
        size_t first = i;
        for (size_t j = 0; j < i; ++j) {
            if (sources[j] == sources[i]) {
                first = j;
                break;
            }
        }
        std::vector<int> taus;
        if (first < i) {
            for (size_t l = 0; l < targets.size(); ++l) {
                taus.push_back(table.entries[first * targets.size() + l].tau);
            }
        } else {
            taus = run_source(m, sources[i], targets, opt);
        }
        for (size_t l = 0; l < targets.size(); ++l) {
            table.entries.push_back({sources[i], targets[l], taus[l]});
        }
    }
    return table;
}

int first_passage(const MediumRealization& m, Vec2 y, Vec2 z, int horizon, int window,
                  PassageOptions opt) {
    opt.horizon = horizon;
    opt.window = window;
    return measure_passage(m, {y}, {z}, opt).entries.front().tau;
}

SubadditivityReport subadditivity_check(const PassageTimeTable& table,
                                        const std::vector<Triple>& triples) {
    SubadditivityReport rep;
    rep.slack = table.window + 1.0;
    rep.worst_excess = -std::numeric_limits<double>::infinity();
    for (const Triple& tr : triples) {
        int t_yz = table.tau_of(tr.y, tr.z);
        int t_yx = table.tau_of(tr.y, tr.x);
        int t_xz = table.tau_of(tr.x, tr.z);
        if (t_yz == kUnresolved || t_yx == kUnresolved || t_xz == kUnresolved) {
            throw SolverError("unresolved leg in subadditivity triple");
        }
        rep.worst_excess = std::max(rep.worst_excess, static_cast<double>(t_yz - t_yx - t_xz));
        ++rep.checked;
    }
    if (rep.checked == 0) rep.worst_excess = 0.0;
    rep.pass = rep.worst_excess <= rep.slack;
    return rep;
}

RegularityReport regularity_check(const PassageTimeTable& table) {
    RegularityReport rep;
    rep.slack = table.window + 1.0;
    std::vector<size_t> resolved;
    for (size_t i = 0; i < table.entries.size(); ++i) {
        if (table.entries[i].tau != kUnresolved) resolved.push_back(i);
    }
    for (size_t i : resolved) {
        const PassageEntry& e = table.entries[i];
        rep.fitted_C = std::max(rep.fitted_C, e.tau / (norm(e.target - e.source) + 1.0));
    }
    rep.worst_excess = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < resolved.size(); ++a) {
        for (size_t b = a + 1; b < resolved.size(); ++b) {
            const PassageEntry& p = table.entries[resolved[a]];
            const PassageEntry& q = table.entries[resolved[b]];
            double lhs = std::fabs(static_cast<double>(p.tau - q.tau));
            double rhs = 3.0 * rep.fitted_C *
                             (norm(p.source - q.source) + norm(p.target - q.target) + 2.0) +
                         rep.slack;
            rep.worst_excess = std::max(rep.worst_excess, lhs - rhs);
            if (lhs > rhs) ++rep.violations;
            ++rep.pairs_checked;
        }
    }
    if (rep.pairs_checked == 0) rep.worst_excess = 0.0;
    rep.pass = rep.violations == 0;
    return rep;
}

SpeedEstimate spreading_speed(const MediumRealization& m, Vec2 e, const std::vector<int>& ladder,
                              const PassageOptions& opt) {
    check_ladder(ladder);
    Vec2 u = unit(e);
    std::vector<Vec2> targets;
    for (int n : ladder) targets.push_back(u * static_cast<double>(n));
    PassageTimeTable table = measure_passage(m, {Vec2{0.0, 0.0}}, targets, opt);

    SpeedEstimate est;
    est.e = u;
    est.ladder = ladder;
    for (size_t i = 0; i < ladder.size(); ++i) {
        int tau = table.entries[i].tau;
        if (tau == kUnresolved) {
            throw SolverError("spreading_speed: rung n=" + std::to_string(ladder[i]) +
                              " unresolved below horizon " + std::to_string(opt.horizon));
        }
        if (tau == 0) {
            throw SolverError("spreading_speed: rung n=" + std::to_string(ladder[i]) +
                              " resolved at time 0; rung too close to the source");
        }
        est.taus.push_back(tau);
        est.values.push_back(ladder[i] / static_cast<double>(tau));
    }
    est.speed = richardson(est.ladder, est.values);
    est.uncertainty = std::fabs(est.values.back() - est.values[est.values.size() - 2]);
    return est;
}

WulffEstimate estimate_wulff(const MediumRealization& m, const std::vector<Vec2>& directions,
                             const std::vector<int>& ladder, const PassageOptions& opt) {
    check_ladder(ladder);
    if (directions.empty()) throw std::invalid_argument("estimate_wulff needs directions");
    std::vector<Vec2> dirs;
    for (Vec2 e : directions) dirs.push_back(unit(e));

    // shared origin: every direction and rung is a target of one campaign
    std::vector<Vec2> targets;
    for (Vec2 e : dirs) {
        for (int n : ladder) targets.push_back(e * static_cast<double>(n));
    }
    PassageTimeTable table = measure_passage(m, {Vec2{0.0, 0.0}}, targets, opt);

    WulffEstimate west;
    west.speed_cap = supersolution_rate(m);
    std::vector<double> speeds;
    for (size_t di = 0; di < dirs.size(); ++di) {
        SpeedEstimate est;
        est.e = dirs[di];
        est.ladder = ladder;
        for (size_t i = 0; i < ladder.size(); ++i) {
            int tau = table.entries[di * ladder.size() + i].tau;
            if (tau == kUnresolved || tau == 0) {
                throw SolverError("estimate_wulff: rung n=" + std::to_string(ladder[i]) +
                                  " unresolved in direction " + std::to_string(di));
            }
            est.taus.push_back(tau);
            est.values.push_back(ladder[i] / static_cast<double>(tau));
        }
        est.speed = richardson(est.ladder, est.values);
        est.uncertainty = std::fabs(est.values.back() - est.values[est.values.size() - 2]);
        west.max_uncertainty = std::max(west.max_uncertainty, est.uncertainty);
        if (est.speed > west.speed_cap) west.within_cap = false;
        speeds.push_back(est.speed);
        west.speeds.push_back(std::move(est));
    }
    west.fit = shape_from_speeds(m.dim, dirs, speeds);
    return west;
}

WulffEnsemble wulff_ensemble(const MediumParams& params, const std::vector<std::uint64_t>& seeds,
                             const std::vector<Vec2>& directions, const std::vector<int>& ladder,
                             const PassageOptions& opt) {
    if (seeds.empty()) throw std::invalid_argument("wulff_ensemble needs seeds");
    WulffEnsemble ens;
    for (std::uint64_t s : seeds) {
        MediumRealization m = sample_medium(params, s);
        ens.members.push_back(estimate_wulff(m, directions, ladder, opt));
    }
    for (size_t a = 0; a < ens.members.size(); ++a) {
        for (size_t b = a + 1; b < ens.members.size(); ++b) {
            ens.spread = std::max(
                ens.spread, hausdorff_distance(ens.members[a].fit.shape, ens.members[b].fit.shape));
        }
    }
    return ens;
}

namespace {

// Slab run along u at propagation bound `guess`; make_stepper supplies the
// update operator on the finished grid.
FrontSpeedResult front_speed_core(
    int dim, Vec2 e, double T, const FrontOptions& opt, double guess,
    const std::function<std::unique_ptr<TimeStepper>(const Grid&)>& make_stepper) {
    if (T < 4.0 || T != std::floor(T)) {
        throw std::invalid_argument("front_speed_direct needs an integer T >= 4");
    }
    Vec2 u = unit(e);
    if (dim == 1 && u.y != 0.0) throw std::invalid_argument("direction leaves the line");

    double l_front = guess * T + opt.front_margin;
    double l_back = opt.back_length;
    double w_lat = opt.strip_halfwidth + opt.lateral_pad_factor * guess * T;

    // axis-aligned cover of the slab [-l_back, l_front] x [-w_lat, w_lat]
    // laid along u
    Vec2 perp{-u.y, u.x};
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (double s : {-l_back, l_front}) {
        for (double q : (dim == 2 ? std::vector<double>{-w_lat, w_lat}
                                  : std::vector<double>{0.0})) {
            Vec2 c = u * s + perp * q;
            lo.x = std::min(lo.x, c.x);
            lo.y = std::min(lo.y, c.y);
            hi.x = std::max(hi.x, c.x);
            hi.y = std::max(hi.y, c.y);
        }
    }
    Grid g = Grid::covering_box(dim, lo, hi, opt.h);
    std::unique_ptr<TimeStepper> st = make_stepper(g);
    Field u0 = half_space_indicator(g, u, 0.0, opt.level);

    FrontSpeedResult res;
    res.e = u;
    res.T = T;
    SolveOptions so;
    so.parallel = opt.parallel;
    so.boundary_tolerance = -1.0;  // data occupies the back wall by design
    so.integer_probe = [&](const Field& f) -> bool {
        double p = -std::numeric_limits<double>::infinity();
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                if (f.at(ix, iy) < opt.level) continue;
                Vec2 c = g.center(ix, iy);
                if (dim == 2 && std::fabs(dot(c, perp)) > opt.strip_halfwidth) continue;
                p = std::max(p, dot(c, u));
            }
        }
        if (p > l_front - opt.front_margin) {
            throw DomainTooSmall("front at " + format_double(p) + " inside the forward margin");
        }
        res.positions.push_back(p);
        return true;
    };
    solve(u0, *st, T, so);

    // least-squares fit over integer times in [T/2, T]
    int t_lo = static_cast<int>(std::ceil(T / 2.0));
    int t_hi = static_cast<int>(T);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, n = 0.0;
    for (int t = t_lo; t <= t_hi; ++t) {
        double p = res.positions[static_cast<size_t>(t)];
        sx += t;
        sy += p;
        sxx += static_cast<double>(t) * t;
        sxy += t * p;
        n += 1.0;
    }
    double denom = n * sxx - sx * sx;
    res.speed = (n * sxy - sx * sy) / denom;
    res.intercept = (sy - res.speed * sx) / n;
    return res;
}

}  // namespace

FrontSpeedResult front_speed_direct(const MediumRealization& m, Vec2 e, double T,
                                    const FrontOptions& opt) {
    return front_speed_core(m.dim, e, T, opt, speed_guess(m), [&](const Grid& g) {
        return std::make_unique<LocalStepper>(g, m);
    });
}

FrontSpeedResult front_speed_nonlocal(const MediumRealization& m, const KernelSpec& k, Vec2 e,
                                      double T, const FrontOptions& opt,
                                      const NonlocalOptions& nopt) {
    // jumps can outrun the local bound; size the slab by the discrete
    // nonlocal supersolution bound, probed on a throwaway grid
    Grid pilot = Grid::covering_ball(m.dim, Vec2{0.0, 0.0}, 4.0, opt.h);
    double guess = NonlocalStepper(pilot, k, m, nopt).speed_bound(unit(e)) + 0.5;
    return front_speed_core(m.dim, e, T, opt, guess, [&](const Grid& g) {
        return std::make_unique<NonlocalStepper>(g, k, m, nopt);
    });
}

StrongWulffReport strong_wulff_probe(const MediumRealization& m, const ConvexShape& shape,
                                     const std::vector<Vec2>& shifts, double t, double delta,
                                     double theta, const PassageOptions& opt) {
    if (shape.dim != m.dim) throw std::invalid_argument("shape dimension mismatch");
    if (!(t > 0.0) || !(delta > 0.0 && delta < 1.0) || !(theta > 0.0 && theta < 1.0)) {
        throw std::invalid_argument("strong_wulff_probe needs t > 0, delta in (0,1), theta in (0,1)");
    }

    Polygon inner = inner_polygon(shape);
    double s_in = (1.0 - delta) * t;
    double s_out = (1.0 + delta) * t;
    Polygon inner_scaled;
    for (Vec2 v : inner.pts) inner_scaled.pts.push_back(v * s_in);

    StrongWulffReport rep;
    rep.t = t;
    rep.delta = delta;
    rep.theta = theta;

    int passed = 0;
    for (Vec2 y : shifts) {
        double base_r = s_out * shape.max_radial() + 25.0;
        Field uf;
        for (int attempt = 0;; ++attempt) {
            Grid g = Grid::covering_ball(m.dim, y, base_r, opt.h);
            LocalStepper st(g, m);
            Field u0 = ball_indicator(g, y, 1.0, opt.level);
            SolveOptions so;
            so.parallel = opt.parallel;
            so.boundary_tolerance = opt.boundary_tolerance;
            try {
                uf = solve(u0, st, t, so).final;
                break;
            } catch (const DomainTooSmall&) {
                if (attempt >= 3) throw;
                base_r *= 1.4;
            }
        }

        ShiftProbe probe;
        probe.shift = y;
        const Grid& g = uf.grid;
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                Vec2 x = g.center(ix, iy) - y;
                bool in_inner;
                if (m.dim == 1) {
                    in_inner = -s_in * shape.support({-1.0, 0.0}) <= x.x &&
                               x.x <= s_in * shape.support({1.0, 0.0});
                } else {
                    in_inner = polygon_contains_point(inner_scaled, x);
                }
                double v = uf.at(ix, iy);
                if (in_inner && v < theta) ++probe.inner_violations;
                if (v >= theta) {
                    for (size_t i = 0; i < shape.dirs.size(); ++i) {
                        if (dot(x, shape.dirs[i]) > s_out * shape.w[i]) {
                            ++probe.outer_violations;
                            break;
                        }
                    }
                }
            }
        }
        probe.inner_pass = probe.inner_violations == 0;
        probe.outer_pass = probe.outer_violations == 0;
        if (probe.inner_pass && probe.outer_pass) ++passed;
        rep.shifts.push_back(probe);
    }
    rep.pass_fraction = shifts.empty() ? 1.0 : static_cast<double>(passed) / shifts.size();
    return rep;
}

}  // namespace kpplab
