#include "kpplab/runner.hpp"

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "kpplab/experiments.hpp"
#include "kpplab/solver.hpp"
#include "kpplab/wulff.hpp"

namespace kpplab {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
    if (!f) throw std::runtime_error("short write to " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return s;
}

void phase(const char* name, const std::string& detail) {
    std::printf("[%s] %s\n", name, detail.c_str());
    std::fflush(stdout);
}

// Writes a data artifact and records its name and content hash.
struct Emitter {
    std::string dir;
    RunRecord* rec;

    void operator()(const std::string& name, const std::string& content) const {
        write_text(dir + "/" + name, content);
        rec->artifacts.push_back(name);
        rec->artifact_hash.push_back({name, to_hex(fnv1a(content))});
    }
};

std::string csv_header(const RunRecord& rec) {
    return "# kpplab schema 1 config " + rec.config_hash + " seed " + std::to_string(rec.seed) +
           "\n";
}

void stamp(ordered_json& j, const RunRecord& rec) {
    j["schema_version"] = 1;
    j["config"] = rec.config_hash;
    j["seed"] = rec.seed;
}

void add_summary(RunRecord& rec, const std::string& key, const std::string& value) {
    rec.summary.push_back({key, value});
}

std::string field_csv(const RunRecord& rec, const Field& f) {
    std::string s = csv_header(rec);
    const Grid& g = f.grid;
    s += "# t " + format_double(f.time) + "\n";
    s += g.dim == 2 ? "x,y,u\n" : "x,u\n";
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            Vec2 c = g.center(ix, iy);
            s += format_double(c.x);
            if (g.dim == 2) s += "," + format_double(c.y);
            s += "," + format_double(f.at(ix, iy)) + "\n";
        }
    }
    return s;
}

// ------------------------------------------------------------------- gating

struct GateReport {
    ValidationReport kpp;
    DriftBoundReport drift;
    bool ellipticity = false;
    ValidationReport kernel;
    bool has_kernel = false;

    bool all_pass() const {
        bool ok = kpp.all_pass() && drift.pass && ellipticity;
        if (has_kernel) ok = ok && kernel.all_pass();
        return ok;
    }
    std::string first_failure() const {
        if (!drift.pass) {
            return "drift bound sup|b|^2 < 4*lambda*inf fu0 fails (sup|b|^2 = " +
                   format_double(drift.sup_b_sq) + ", bound = " + format_double(drift.bound) + ")";
        }
        if (!ellipticity) return "ellipticity floor violated";
        for (const auto& cnd : kpp.conditions) {
            if (!cnd.pass) return "reaction condition '" + cnd.name + "' fails: " + cnd.witness;
        }
        if (has_kernel) {
            for (const auto& cnd : kernel.conditions) {
                if (!cnd.pass) return "kernel condition '" + cnd.name + "' fails: " + cnd.witness;
            }
        }
        return "";
    }
};

GateReport run_gate(const MediumRealization& m, const KernelSpec* ks, std::uint64_t seed) {
    GateReport g;
    std::vector<double> u_samples;
    for (int i = 0; i <= 100; ++i) u_samples.push_back(i / 100.0);
    u_samples.push_back(1e-8);
    u_samples.push_back(1.0 - 1e-8);

    std::vector<std::pair<double, Vec2>> tx;
    RngStream rng(seed ^ 0x74780001u);
    for (int i = 0; i < 64; ++i) {
        double t = rng.next_u01();
        Vec2 x{rng.next_in(-8.0, 8.0), 0.0};
        if (m.dim == 2) x.y = rng.next_in(-8.0, 8.0);
        tx.push_back({t, x});
    }

    g.kpp = validate_kpp(reaction_of(m), u_samples, tx);
    g.drift = validate_drift_bound(m);
    g.ellipticity = validate_ellipticity(m);
    if (ks) {
        g.has_kernel = true;
        g.kernel = validate_kernel(*ks, tx);
    }
    return g;
}

ordered_json report_json(const ValidationReport& r) {
    ordered_json arr = ordered_json::array();
    for (const auto& cnd : r.conditions) {
        ordered_json c;
        c["name"] = cnd.name;
        c["pass"] = cnd.pass;
        if (!cnd.witness.empty()) c["witness"] = cnd.witness;
        arr.push_back(c);
    }
    return arr;
}

// --------------------------------------------------------------- dispatch

double nonlocal_guess(const MediumRealization& m, const KernelSpec& ks, double h) {
    Grid pilot = Grid::covering_ball(m.dim, Vec2{0.0, 0.0}, 4.0, h);
    NonlocalStepper st(pilot, ks, m);
    std::vector<Vec2> dirs = m.dim == 1 ? std::vector<Vec2>{{1.0, 0.0}, {-1.0, 0.0}}
                                        : direction_grid(2, 16);
    double g = 0.0;
    for (Vec2 e : dirs) g = std::max(g, st.speed_bound(e));
    return g;
}

void do_simulate(const RunConfig& c, const MediumRealization& m, const KernelSpec* ks,
                 const Emitter& emit, RunRecord& rec) {
    const SimulateConfig& sc = c.simulate;
    const int dim = m.dim;

    Vec2 c0{0.0, 0.0};
    double r0 = 1.0;
    bool compact = true;
    if (sc.init.shape == "ball") {
        c0 = sc.init.center;
        r0 = sc.init.radius;
    } else if (sc.init.shape == "box") {
        c0 = (sc.init.lo + sc.init.hi) * 0.5;
        r0 = 0.5 * norm(sc.init.hi - sc.init.lo);
    } else {
        compact = false;  // data reaches the boundary by design
    }
    double guess = ks ? nonlocal_guess(m, *ks, c.h) : speed_guess(m);
    bool fixed = sc.radius > 0.0;
    double radius = fixed ? sc.radius : r0 + guess * sc.T + 18.0;

    for (int attempt = 1;; ++attempt) {
        Grid g = Grid::covering_ball(dim, c0, radius, c.h);
        Field u0(g);
        if (sc.init.shape == "ball") {
            u0 = ball_indicator(g, sc.init.center, sc.init.radius, sc.init.level);
        } else if (sc.init.shape == "half_space") {
            u0 = half_space_indicator(g, sc.init.e, sc.init.offset, sc.init.level);
        } else {
            for (int iy = 0; iy < g.ny; ++iy) {
                for (int ix = 0; ix < g.nx; ++ix) {
                    Vec2 p = g.center(ix, iy);
                    bool in = p.x >= sc.init.lo.x && p.x < sc.init.hi.x &&
                              (dim == 1 || (p.y >= sc.init.lo.y && p.y < sc.init.hi.y));
                    if (in) u0.at(ix, iy) = sc.init.level;
                }
            }
        }

        LocalStepper local(g, m);
        std::unique_ptr<NonlocalStepper> nl;
        if (ks) nl = std::make_unique<NonlocalStepper>(g, *ks, m);
        const TimeStepper& st = ks ? static_cast<const TimeStepper&>(*nl) : local;

        SolveOptions so;
        so.observe_times = sc.snapshots;
        so.parallel = c.parallel;
        so.boundary_tolerance = compact ? 1e-6 : -1.0;
        try {
            SolveResult sr = solve(u0, st, sc.T, so);
            phase("solve", "T = " + format_double(sc.T) + ", " +
                               std::to_string(g.cell_count()) + " cells");
            for (size_t i = 0; i < sr.snapshots.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", i);
                emit(name, field_csv(rec, sr.snapshots[i]));
            }
            emit("final.csv", field_csv(rec, sr.final));

            double mass = 0.0;
            for (double v : sr.final.values) mass += v;
            mass *= dim == 2 ? c.h * c.h : c.h;
            add_summary(rec, "cells", std::to_string(g.cell_count()));
            add_summary(rec, "final_max", format_double(sr.final.max_value()));
            add_summary(rec, "final_min", format_double(sr.final.min_value()));
            add_summary(rec, "final_mass", format_double(mass));
            add_summary(rec, "boundary_max", format_double(sr.final.boundary_max()));
            return;
        } catch (const DomainTooSmall&) {
            if (fixed || attempt >= 3) throw;
            radius *= 1.4;
        }
    }
}

void do_speed(const RunConfig& c, const MediumRealization& m, const KernelSpec* ks,
              const Emitter& emit, RunRecord& rec) {
    const SpeedConfig& sc = c.speed;
    if (ks && sc.method != "front") {
        throw ConfigError("speed.method: nonlocal runs support only the front method");
    }
    Vec2 e = sc.direction;
    std::vector<double> hs = sc.h_list.empty() ? std::vector<double>{c.h} : sc.h_list;
    bool want_front = sc.method == "front" || sc.method == "both";
    bool want_passage = sc.method == "passage" || sc.method == "both";

    std::string csv = csv_header(rec) + "h,method,speed,aux\n";
    ordered_json jf = ordered_json::array(), jp = ordered_json::array();
    std::vector<double> front_v, passage_v;

    for (double h : hs) {
        if (want_front) {
            FrontOptions fo;
            fo.h = h;
            fo.parallel = c.parallel;
            FrontSpeedResult fr = ks ? front_speed_nonlocal(m, *ks, e, sc.front_T, fo)
                                     : front_speed_direct(m, e, sc.front_T, fo);
            front_v.push_back(fr.speed);
            csv += format_double(h) + ",front," + format_double(fr.speed) + "," +
                   format_double(fr.intercept) + "\n";
            ordered_json r;
            r["h"] = h;
            r["speed"] = fr.speed;
            r["intercept"] = fr.intercept;
            r["positions"] = fr.positions;
            jf.push_back(r);
            phase("front", "h = " + format_double(h) + ", speed = " + format_double(fr.speed));
        }
        if (want_passage) {
            PassageOptions po;
            po.h = h;
            po.window = sc.window;
            po.horizon = sc.horizon > 0 ? sc.horizon : 2 * sc.ladder.back() + 40;
            po.parallel = c.parallel;
            SpeedEstimate se = spreading_speed(m, e, sc.ladder, po);
            passage_v.push_back(se.speed);
            csv += format_double(h) + ",passage," + format_double(se.speed) + "," +
                   format_double(se.uncertainty) + "\n";
            ordered_json r;
            r["h"] = h;
            r["speed"] = se.speed;
            r["uncertainty"] = se.uncertainty;
            r["ladder"] = se.ladder;
            r["taus"] = se.taus;
            jp.push_back(r);
            phase("passage", "h = " + format_double(h) + ", speed = " + format_double(se.speed));
        }
    }

    // second-order Richardson in h over the finest pair
    auto rich2 = [&](const std::vector<double>& v) {
        size_t n = v.size();
        double r = hs[n - 2] / hs[n - 1];
        return v[n - 1] + (v[n - 1] - v[n - 2]) / (r * r - 1.0);
    };
    ordered_json j;
    stamp(j, rec);
    j["direction"] = ordered_json::array({e.x, e.y});
    j["h_list"] = hs;
    if (want_front) j["front"] = jf;
    if (want_passage) j["passage"] = jp;
    if (ks) j["speed_bound"] = nonlocal_guess(m, *ks, hs.back());
    if (want_front) {
        double w = front_v.size() >= 2 ? rich2(front_v) : front_v.back();
        j["w_front"] = w;
        add_summary(rec, "w_front", format_double(w));
    }
    if (want_passage) {
        double w = passage_v.size() >= 2 ? rich2(passage_v) : passage_v.back();
        j["w_passage"] = w;
        add_summary(rec, "w_passage", format_double(w));
    }
    emit("speed.csv", csv);
    emit("speed.json", j.dump(2) + "\n");
}

void do_wulff(const RunConfig& c, const MediumRealization& m, const Emitter& emit,
              RunRecord& rec) {
    const WulffConfig& wc = c.wulff;
    std::vector<Vec2> dirs = m.dim == 1 ? std::vector<Vec2>{{1.0, 0.0}, {-1.0, 0.0}}
                                        : direction_grid(2, wc.directions);
    PassageOptions po;
    po.h = c.h;
    po.window = wc.window;
    po.horizon = wc.horizon > 0 ? wc.horizon : 2 * wc.ladder.back() + 40;
    po.parallel = c.parallel;

    WulffEstimate we = estimate_wulff(m, dirs, wc.ladder, po);
    phase("wulff", std::to_string(dirs.size()) + " directions, max uncertainty " +
                       format_double(we.max_uncertainty));

    std::string csv = csv_header(rec) + "ex,ey,speed,uncertainty\n";
    for (size_t i = 0; i < we.speeds.size(); ++i) {
        csv += format_double(we.fit.shape.dirs[i].x) + "," +
               format_double(we.fit.shape.dirs[i].y) + "," +
               format_double(we.fit.shape.w[i]) + "," +
               format_double(we.speeds[i].uncertainty) + "\n";
    }
    emit("wulff.csv", csv);

    ordered_json j;
    stamp(j, rec);
    j["ladder"] = wc.ladder;
    ordered_json ds = ordered_json::array();
    for (size_t i = 0; i < we.speeds.size(); ++i) {
        ordered_json d;
        d["e"] = ordered_json::array({we.fit.shape.dirs[i].x, we.fit.shape.dirs[i].y});
        d["w"] = we.fit.shape.w[i];
        d["uncertainty"] = we.speeds[i].uncertainty;
        d["taus"] = we.speeds[i].taus;
        ds.push_back(d);
    }
    j["directions"] = ds;
    j["convexity_defect"] = we.fit.convexity_defect;
    j["speed_cap"] = we.speed_cap;
    j["within_cap"] = we.within_cap;
    j["max_uncertainty"] = we.max_uncertainty;
    emit("wulff.json", j.dump(2) + "\n");

    add_summary(rec, "directions", std::to_string(dirs.size()));
    add_summary(rec, "max_uncertainty", format_double(we.max_uncertainty));
    add_summary(rec, "convexity_defect", format_double(we.fit.convexity_defect));
    add_summary(rec, "within_cap", we.within_cap ? "true" : "false");
}

void do_vlin(const RunConfig& c, const MediumRealization& m, const Emitter& emit,
             RunRecord& rec) {
    const VlinConfig& vc = c.vlin;
    Grid g = Grid::covering_box(m.dim, vc.lo, vc.hi, c.h);
    Field u0(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            Vec2 p = g.center(ix, iy);
            bool in = p.x >= vc.lo.x && p.x < vc.hi.x &&
                      (m.dim == 1 || (p.y >= vc.lo.y && p.y < vc.hi.y));
            if (in) u0.at(ix, iy) = vc.theta;
        }
    }
    SandwichOptions so;
    so.parallel = c.parallel;
    SandwichReport rep = virtual_linearity_check(u0, m, vc.times, vc.delta, so);
    phase("vlin", "worst phi_hat " + format_double(rep.worst_phi_hat()));

    std::string csv = csv_header(rec) + "t,left_margin,right_margin,phi_hat\n";
    ordered_json rows = ordered_json::array();
    for (const auto& s : rep.times) {
        csv += format_double(s.t) + "," + format_double(s.left_margin) + "," +
               format_double(s.right_margin) + "," + format_double(s.phi_hat) + "\n";
        ordered_json r;
        r["t"] = s.t;
        r["left_margin"] = s.left_margin;
        r["right_margin"] = s.right_margin;
        r["phi_hat"] = s.phi_hat;
        rows.push_back(r);
    }
    emit("vlin.csv", csv);

    ordered_json j;
    stamp(j, rec);
    j["delta"] = rep.delta;
    j["theta"] = vc.theta;
    j["times"] = rows;
    j["worst_phi_hat"] = rep.worst_phi_hat();
    emit("vlin.json", j.dump(2) + "\n");

    add_summary(rec, "worst_phi_hat", format_double(rep.worst_phi_hat()));
}

void do_homogenize(const RunConfig& c, const MediumRealization& m, const Emitter& emit,
                   RunRecord& rec) {
    const HomogenizeConfig& hc = c.homogenize;
    std::vector<Vec2> dirs = m.dim == 1 ? std::vector<Vec2>{{1.0, 0.0}, {-1.0, 0.0}}
                                        : direction_grid(2, hc.shape_directions);
    std::vector<double> speeds = hc.shape_speeds;
    if (speeds.empty()) {
        // reference speeds from half-space fronts of the base reaction
        std::string csv = csv_header(rec) + "ex,ey,w\n";
        for (Vec2 e : dirs) {
            FrontOptions fo;
            fo.h = c.h;
            fo.parallel = c.parallel;
            FrontSpeedResult fr = front_speed_direct(m, e, hc.shape_front_T, fo);
            speeds.push_back(fr.speed);
            csv += format_double(e.x) + "," + format_double(e.y) + "," +
                   format_double(fr.speed) + "\n";
        }
        emit("shape.csv", csv);
        phase("shape", std::to_string(dirs.size()) + " front speeds measured");
    } else if (speeds.size() != dirs.size()) {
        throw ConfigError("homogenize.shape_speeds: one speed per direction expected");
    }
    ShapeFit fit = shape_from_speeds(m.dim, dirs, speeds);

    SweepParams p;
    p.region = hc.region.build(m.dim);
    p.shape = fit.shape;
    p.eps_list = hc.eps;
    p.obs_times = hc.obs_times;
    p.theta = hc.theta;
    p.band = hc.band;
    p.eta0 = hc.eta0;
    p.eta1 = hc.eta1;
    p.h = c.h;
    p.use_surrogate = hc.surrogate;
    p.parallel = c.parallel;
    SweepRecord sw = homogenization_sweep(m, p);

    std::string csv = csv_header(rec) + "eps,t,measure,cells,inside_low,outside_high\n";
    ordered_json rungs = ordered_json::array();
    for (const auto& er : sw.per_eps) {
        ordered_json obs = ordered_json::array();
        for (const auto& ob : er.obs) {
            csv += format_double(er.eps) + "," + format_double(ob.time) + "," +
                   format_double(ob.zone.measure) + "," + std::to_string(ob.zone.cells) + "," +
                   std::to_string(ob.zone.inside_low) + "," +
                   std::to_string(ob.zone.outside_high) + "\n";
            ordered_json o;
            o["t"] = ob.time;
            o["measure"] = ob.zone.measure;
            o["cells"] = ob.zone.cells;
            o["inside_low"] = ob.zone.inside_low;
            o["outside_high"] = ob.zone.outside_high;
            obs.push_back(o);
        }
        ordered_json r;
        r["eps"] = er.eps;
        r["rho"] = er.rho;
        r["window"] = er.window;
        r["truncation"] = er.truncation;
        r["observations"] = obs;
        rungs.push_back(r);
        phase("sweep", "eps = " + format_double(er.eps) + ", final zone = " +
                           format_double(er.obs.back().zone.measure));
    }
    emit("sweep.csv", csv);

    ordered_json j;
    stamp(j, rec);
    j["theta"] = sw.theta;
    j["band"] = sw.band;
    j["eta0"] = sw.eta0;
    j["eta1"] = sw.eta1;
    j["surrogate"] = hc.surrogate;
    ordered_json sh;
    sh["directions"] = ordered_json::array();
    for (Vec2 e : dirs) sh["directions"].push_back(ordered_json::array({e.x, e.y}));
    sh["speeds"] = speeds;
    j["shape"] = sh;
    j["per_eps"] = rungs;
    emit("sweep.json", j.dump(2) + "\n");

    double first = sw.per_eps.front().obs.back().zone.measure;
    double last = sw.per_eps.back().obs.back().zone.measure;
    add_summary(rec, "zone_first_eps", format_double(first));
    add_summary(rec, "zone_last_eps", format_double(last));
    add_summary(rec, "zone_ratio", format_double(first > 0.0 ? last / first : 0.0));
}

}  // namespace

std::string output_root() {
    const char* env = std::getenv("KPPLAB_OUT");
    return env && *env ? env : "runs";
}

std::string run_directory(const RunConfig& c) {
    if (!c.out.empty()) return c.out;
    return output_root() + "/" + c.kind + "-" + config_hash(c).substr(0, 8);
}

void write_error_file(const std::string& dir, const std::string& type,
                      const std::string& message) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return;
    ordered_json j;
    j["error"] = type;
    j["message"] = message;
    std::ofstream f(dir + "/error.json", std::ios::binary);
    f << j.dump(2) << "\n";
}

RunRecord run(const RunConfig& c) {
    auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.started_unix = std::chrono::duration<double>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
    rec.kind = c.kind;
    rec.config_hash = config_hash(c);
    rec.seed = c.seed;
    rec.out_dir = run_directory(c);
    fs::create_directories(rec.out_dir);
    // a rerun must not inherit stale completion or failure markers
    std::error_code ec;
    fs::remove(rec.out_dir + "/run_record.json", ec);
    fs::remove(rec.out_dir + "/error.json", ec);

#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#endif

    Emitter emit{rec.out_dir, &rec};
    emit("config.json", serialize_config(c));
    phase("config", rec.out_dir + " (config " + rec.config_hash + ", seed " +
                        std::to_string(c.seed) + ")");

    MediumRealization m = sample_medium(c.medium, c.seed);
    KernelSpec ks;
    if (c.has_kernel) ks = make_checkerboard_kernel(c.kernel, c.seed);
    const KernelSpec* ksp = c.has_kernel ? &ks : nullptr;

    // hypotheses first; experiment kinds refuse to solve on failure
    GateReport gate = run_gate(m, ksp, c.seed);
    if (c.kind == "validate") {
        ordered_json j;
        stamp(j, rec);
        j["reaction"] = report_json(gate.kpp);
        ordered_json d;
        d["sup_b_sq"] = gate.drift.sup_b_sq;
        d["bound"] = gate.drift.bound;
        d["pass"] = gate.drift.pass;
        j["drift_bound"] = d;
        j["ellipticity"] = gate.ellipticity;
        if (gate.has_kernel) j["kernel"] = report_json(gate.kernel);
        j["all_pass"] = gate.all_pass();
        emit("validation.json", j.dump(2) + "\n");
        rec.ok = gate.all_pass();
        phase("validate", rec.ok ? "all conditions pass" : gate.first_failure());
        add_summary(rec, "all_pass", rec.ok ? "true" : "false");
    } else {
        if (!gate.all_pass()) {
            throw ConfigError("hypothesis check failed before any solve: " +
                              gate.first_failure());
        }
        phase("gate", "hypotheses hold");
        if (c.kind == "simulate") {
            do_simulate(c, m, ksp, emit, rec);
        } else if (c.kind == "speed") {
            do_speed(c, m, ksp, emit, rec);
        } else if (c.kind == "wulff") {
            do_wulff(c, m, emit, rec);
        } else if (c.kind == "vlin") {
            do_vlin(c, m, emit, rec);
        } else if (c.kind == "homogenize") {
            do_homogenize(c, m, emit, rec);
        } else {
            throw ConfigError("run.kind: unknown kind " + c.kind);
        }
        rec.ok = true;
    }

    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.finished_unix = std::chrono::duration<double>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();

    ordered_json j;
    j["schema_version"] = rec.schema_version;
    j["kind"] = rec.kind;
    j["config"] = rec.config_hash;
    j["seed"] = rec.seed;
    j["ok"] = rec.ok;
    j["started_unix"] = rec.started_unix;
    j["finished_unix"] = rec.finished_unix;
    j["wall_seconds"] = rec.wall_seconds;
    j["artifacts"] = rec.artifacts;
    ordered_json ah;
    for (const auto& [name, hash] : rec.artifact_hash) ah[name] = hash;
    j["artifact_hash"] = ah;
    ordered_json sm;
    for (const auto& [k, v] : rec.summary) sm[k] = v;
    j["summary"] = sm;
    write_text(rec.out_dir + "/run_record.json", j.dump(2) + "\n");
    phase("done", rec.out_dir + "/run_record.json");
    return rec;
}

std::vector<RegistryEntry> registry_list(const std::string& root) {
    std::vector<RegistryEntry> out;
    std::error_code ec;
    fs::directory_iterator it(root, ec);
    if (ec) return out;
    for (const auto& entry : it) {
        if (!entry.is_directory()) continue;
        RegistryEntry e;
        e.dir = entry.path().string();
        std::string record_path = e.dir + "/run_record.json";
        std::string config_path = e.dir + "/config.json";
        if (fs::exists(record_path)) {
            try {
                json j = json::parse(read_text(record_path));
                e.record.schema_version = j.value("schema_version", 0);
                e.record.kind = j.value("kind", std::string());
                e.record.config_hash = j.value("config", std::string());
                e.record.seed = j.value("seed", std::uint64_t{0});
                e.record.ok = j.value("ok", false);
                e.record.started_unix = j.value("started_unix", 0.0);
                e.record.finished_unix = j.value("finished_unix", 0.0);
                e.record.wall_seconds = j.value("wall_seconds", 0.0);
                e.record.out_dir = e.dir;
                if (j.contains("artifacts")) {
                    e.record.artifacts = j["artifacts"].get<std::vector<std::string>>();
                }
                if (j.contains("artifact_hash")) {
                    for (auto itm = j["artifact_hash"].begin(); itm != j["artifact_hash"].end();
                         ++itm) {
                        e.record.artifact_hash.push_back({itm.key(), itm.value().get<std::string>()});
                    }
                }
                if (j.contains("summary")) {
                    for (auto itm = j["summary"].begin(); itm != j["summary"].end(); ++itm) {
                        e.record.summary.push_back({itm.key(), itm.value().get<std::string>()});
                    }
                }
                e.complete = true;
            } catch (const std::exception& ex) {
                e.partial = true;
                e.note = std::string("unreadable run record: ") + ex.what();
            }
        } else if (fs::exists(config_path)) {
            e.partial = true;
            e.note = "config.json present but no run record (interrupted run)";
        } else {
            continue;  // not a run directory
        }
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(),
              [](const RegistryEntry& a, const RegistryEntry& b) { return a.dir < b.dir; });
    return out;
}

}  // namespace kpplab
