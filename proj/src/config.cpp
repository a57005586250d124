#include "kpplab/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace kpplab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Collects every defect as "path: problem" so one pass reports them all.
struct Errors {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& what) { list.push_back(path + ": " + what); }
    void raise_if_any() const {
        if (list.empty()) return;
        std::string msg = "config invalid";
        for (const auto& e : list) msg += "\n  " + e;
        throw ConfigError(msg);
    }
};

// One section: typed getters that record defects instead of throwing, plus
// an unknown-key sweep once every reader has claimed its keys.
struct Section {
    const json* obj = nullptr;  // null when the section is absent
    std::string path;
    Errors* err = nullptr;
    std::set<std::string> seen;

    bool has(const std::string& key) {
        seen.insert(key);
        return obj && obj->contains(key);
    }
    template <class T>
    void get(const std::string& key, T& out, bool (*check)(const T&) = nullptr,
             const char* constraint = nullptr) {
        if (!has(key)) return;
        const json& v = (*obj)[key];
        bool type_ok;
        if constexpr (std::is_same_v<T, double>) {
            type_ok = v.is_number();
        } else if constexpr (std::is_same_v<T, int>) {
            type_ok = v.is_number_integer();
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            type_ok = v.is_number_unsigned();
        } else if constexpr (std::is_same_v<T, bool>) {
            type_ok = v.is_boolean();
        } else {
            type_ok = v.is_string();
        }
        if (!type_ok) {
            err->add(path + "." + key, "wrong type");
            return;
        }
        T got = v.get<T>();
        if (check && !check(got)) {
            err->add(path + "." + key, constraint);
            return;
        }
        out = got;
    }
    void get_vec(const std::string& key, std::vector<double>& out) {
        if (!has(key)) return;
        const json& v = (*obj)[key];
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
            err->add(path + "." + key, "expected an array of numbers");
            return;
        }
        out = v.get<std::vector<double>>();
    }
    void get_vec_int(const std::string& key, std::vector<int>& out) {
        if (!has(key)) return;
        const json& v = (*obj)[key];
        if (!v.is_array() ||
            !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); })) {
            err->add(path + "." + key, "expected an array of integers");
            return;
        }
        out = v.get<std::vector<int>>();
    }
    void get_vec2(const std::string& key, Vec2& out) {
        if (!has(key)) return;
        const json& v = (*obj)[key];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            err->add(path + "." + key, "expected [x, y]");
            return;
        }
        out = Vec2{v[0].get<double>(), v[1].get<double>()};
    }
    void finish() {
        if (!obj) return;
        for (auto it = obj->begin(); it != obj->end(); ++it) {
            if (!seen.count(it.key())) err->add(path + "." + it.key(), "unknown key");
        }
    }
};

Section section_of(const json& root, const std::string& name, Errors& err,
                   std::set<std::string>& top_seen) {
    top_seen.insert(name);
    Section s;
    s.path = name;
    s.err = &err;
    if (root.contains(name)) {
        if (!root[name].is_object()) {
            err.add(name, "expected an object");
        } else {
            s.obj = &root[name];
        }
    }
    return s;
}

bool positive(const double& v) { return v > 0.0; }
bool non_negative(const double& v) { return v >= 0.0; }
bool unit_open(const double& v) { return v > 0.0 && v < 1.0; }
bool level_ok(const double& v) { return v > 0.0 && v <= 1.0; }
bool delta_ok(const double& v) { return v > 0.0 && v <= 0.5; }
bool amp_ok(const double& v) { return v >= 0.0 && v < 1.0; }

void parse_value_law(Section& s, const std::string& range_key, const std::string& values_key,
                     ValueLaw& law) {
    std::vector<double> range;
    s.get_vec(range_key, range);
    if (!range.empty()) {
        if (range.size() != 2 || range[0] > range[1] || range[0] <= 0.0) {
            s.err->add(s.path + "." + range_key, "expected [lo, hi] with 0 < lo <= hi");
        } else {
            law.lo = range[0];
            law.hi = range[1];
        }
    }
    std::vector<double> values;
    s.get_vec(values_key, values);
    if (!values.empty()) {
        for (double v : values) {
            if (v <= 0.0) {
                s.err->add(s.path + "." + values_key, "values must be positive");
                values.clear();
                break;
            }
        }
        law.values = values;
    }
}

json jvec2(Vec2 v) { return json::array({v.x, v.y}); }

const char* generator_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::homogeneous: return "homogeneous";
        case GeneratorKind::checkerboard: return "checkerboard";
        case GeneratorKind::fourier: return "fourier";
    }
    return "homogeneous";
}

const char* profile_key(ReactionProfile p) {
    switch (p) {
        case ReactionProfile::logistic: return "logistic";
        case ReactionProfile::min_cut: return "min_cut";
        case ReactionProfile::quadratic_degenerate: return "quadratic";
    }
    return "logistic";
}

}  // namespace

RegionSpec RegionConfig::build(int dim) const {
    if (kind == "ball") return RegionSpec::make_ball(dim, center, radius);
    if (kind == "box") return RegionSpec::make_box(dim, lo, hi);
    if (kind == "half_space") return RegionSpec::make_half_space(dim, e, offset);
    if (kind == "box_complement") return RegionSpec::make_box_complement(dim, lo, hi);
    if (kind == "box_union") {
        std::vector<std::pair<Vec2, Vec2>> bs;
        for (size_t i = 0; i + 3 < boxes.size(); i += 4) {
            bs.push_back({Vec2{boxes[i], boxes[i + 1]}, Vec2{boxes[i + 2], boxes[i + 3]}});
        }
        return RegionSpec::make_box_union(dim, std::move(bs));
    }
    throw ConfigError("region.kind: unknown kind " + kind);
}

const std::vector<std::string>& config_kinds() {
    static const std::vector<std::string> kinds{"validate", "simulate", "speed",
                                                "wulff",    "vlin",     "homogenize"};
    return kinds;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig c;
    Errors err;
    std::set<std::string> top_seen;

    Section run = section_of(root, "run", err, top_seen);
    run.get<std::string>("kind", c.kind);
    if (std::find(config_kinds().begin(), config_kinds().end(), c.kind) == config_kinds().end()) {
        err.add("run.kind", "unknown kind " + c.kind);
    }
    run.get<std::uint64_t>("seed", c.seed);
    run.get<std::string>("out", c.out);
    run.get<int>("threads", c.threads,
                 [](const int& v) { return v >= 0; }, "must be >= 0");
    run.get<bool>("parallel", c.parallel);
    {
        int sv = c.schema_version;
        run.get<int>("schema_version", sv);
        if (sv != 1) err.add("run.schema_version", "unsupported version");
    }
    run.finish();

    Section grid = section_of(root, "grid", err, top_seen);
    grid.get<double>("h", c.h, positive, "must be positive");
    grid.finish();

    Section med = section_of(root, "medium", err, top_seen);
    {
        std::string gen = generator_name(c.medium.kind);
        med.get<std::string>("generator", gen);
        if (gen == "homogeneous") {
            c.medium.kind = GeneratorKind::homogeneous;
        } else if (gen == "checkerboard") {
            c.medium.kind = GeneratorKind::checkerboard;
        } else if (gen == "fourier") {
            c.medium.kind = GeneratorKind::fourier;
        } else {
            err.add("medium.generator", "unknown generator " + gen);
        }
    }
    med.get<int>("dim", c.medium.dim,
                 [](const int& v) { return v == 1 || v == 2; }, "must be 1 or 2");
    {
        std::string prof = profile_key(c.medium.profile);
        med.get<std::string>("profile", prof);
        if (prof == "logistic") {
            c.medium.profile = ReactionProfile::logistic;
        } else if (prof == "min_cut") {
            c.medium.profile = ReactionProfile::min_cut;
        } else if (prof == "quadratic") {
            c.medium.profile = ReactionProfile::quadratic_degenerate;
        } else {
            err.add("medium.profile", "unknown profile " + prof);
        }
    }
    med.get<double>("a11", c.medium.A.a11, positive, "must be positive");
    med.get<double>("a12", c.medium.A.a12);
    med.get<double>("a22", c.medium.A.a22, positive, "must be positive");
    med.get_vec2("b", c.medium.b);
    med.get<double>("fu0", c.medium.fu0, positive, "must be positive");
    parse_value_law(med, "diffusion_law", "diffusion_values", c.medium.diffusion_law);
    parse_value_law(med, "fu0_law", "fu0_values", c.medium.fu0_law);
    med.get<double>("drift_amp", c.medium.drift_amp, non_negative, "must be >= 0");
    med.get<double>("mollify_radius", c.medium.mollify_radius,
                    [](const double& v) { return v > 0.0 && v <= 0.5; }, "must lie in (0, 1/2]");
    med.get<int>("modes", c.medium.modes,
                 [](const int& v) { return v >= 1; }, "must be >= 1");
    med.get<double>("contrast", c.medium.contrast,
                    [](const double& v) { return v >= 0.0 && v < 1.0; }, "must lie in [0, 1)");
    med.get<double>("base_diffusion", c.medium.base_diffusion, positive, "must be positive");
    med.get<double>("base_fu0", c.medium.base_fu0, positive, "must be positive");
    med.get<double>("time_amp_diffusion", c.medium.time_amp_diffusion, amp_ok, "must lie in [0, 1)");
    med.get<double>("time_amp_drift", c.medium.time_amp_drift, amp_ok, "must lie in [0, 1)");
    med.get<double>("time_amp_fu0", c.medium.time_amp_fu0, amp_ok, "must lie in [0, 1)");
    med.finish();

    Section ker = section_of(root, "kernel", err, top_seen);
    if (ker.obj) {
        c.has_kernel = true;
        ker.get<double>("alpha", c.kernel.alpha,
                        [](const double& v) { return v > 0.0 && v <= 2.0; }, "must lie in (0, 2]");
        ker.get<bool>("tail", c.kernel.tail);
        ker.get<double>("contrast", c.kernel.contrast,
                        [](const double& v) { return v >= 0.0 && v <= 1.0; }, "must lie in [0, 1]");
        ker.get<double>("mollify_radius", c.kernel.mollify_radius,
                        [](const double& v) { return v > 0.0 && v <= 0.5; }, "must lie in (0, 1/2]");
        ker.get<double>("time_amp", c.kernel.time_amp, amp_ok, "must lie in [0, 1)");
    }
    ker.finish();
    c.kernel.dim = c.medium.dim;
    if (c.has_kernel && c.kind != "simulate" && c.kind != "speed" && c.kind != "validate") {
        err.add("kernel", "nonlocal diffusion is only wired to simulate, speed and validate");
    }

    Section sim = section_of(root, "simulate", err, top_seen);
    sim.get<double>("T", c.simulate.T, positive, "must be positive");
    sim.get<double>("radius", c.simulate.radius, non_negative, "must be >= 0");
    sim.get_vec("snapshots", c.simulate.snapshots);
    for (double t : c.simulate.snapshots) {
        if (t < 0.0 || t > c.simulate.T) {
            err.add("simulate.snapshots", "times must lie in [0, T]");
            break;
        }
    }
    sim.get<std::string>("init", c.simulate.init.shape);
    if (c.simulate.init.shape != "ball" && c.simulate.init.shape != "half_space" &&
        c.simulate.init.shape != "box") {
        err.add("simulate.init", "unknown initial shape " + c.simulate.init.shape);
    }
    sim.get<double>("level", c.simulate.init.level, level_ok, "must lie in (0, 1]");
    sim.get_vec2("center", c.simulate.init.center);
    sim.get<double>("init_radius", c.simulate.init.radius, positive, "must be positive");
    sim.get_vec2("e", c.simulate.init.e);
    sim.get<double>("offset", c.simulate.init.offset);
    sim.get_vec2("lo", c.simulate.init.lo);
    sim.get_vec2("hi", c.simulate.init.hi);
    sim.finish();

    Section spd = section_of(root, "speed", err, top_seen);
    spd.get<std::string>("method", c.speed.method);
    if (c.speed.method != "front" && c.speed.method != "passage" && c.speed.method != "both") {
        err.add("speed.method", "must be front, passage or both");
    }
    spd.get_vec2("direction", c.speed.direction);
    if (norm(c.speed.direction) <= 0.0) err.add("speed.direction", "must be nonzero");
    spd.get_vec("h_list", c.speed.h_list);
    for (size_t i = 0; i < c.speed.h_list.size(); ++i) {
        if (c.speed.h_list[i] <= 0.0 ||
            (i > 0 && c.speed.h_list[i] >= c.speed.h_list[i - 1])) {
            err.add("speed.h_list", "must be positive and strictly decreasing");
            break;
        }
    }
    spd.get<double>("front_T", c.speed.front_T,
                    [](const double& v) { return v >= 4.0; }, "must be >= 4");
    spd.get_vec_int("ladder", c.speed.ladder);
    for (size_t i = 0; i < c.speed.ladder.size(); ++i) {
        if (c.speed.ladder[i] < 1 || (i > 0 && c.speed.ladder[i] <= c.speed.ladder[i - 1])) {
            err.add("speed.ladder", "must be positive and strictly increasing");
            break;
        }
    }
    if (c.speed.ladder.size() < 2) err.add("speed.ladder", "needs at least two rungs");
    spd.get<int>("horizon", c.speed.horizon,
                 [](const int& v) { return v >= 0; }, "must be >= 0");
    spd.get<int>("window", c.speed.window,
                 [](const int& v) { return v >= 0; }, "must be >= 0");
    spd.finish();

    Section wul = section_of(root, "wulff", err, top_seen);
    wul.get<int>("directions", c.wulff.directions,
                 [](const int& v) { return v >= 3; }, "must be >= 3");
    wul.get_vec_int("ladder", c.wulff.ladder);
    for (size_t i = 0; i < c.wulff.ladder.size(); ++i) {
        if (c.wulff.ladder[i] < 1 || (i > 0 && c.wulff.ladder[i] <= c.wulff.ladder[i - 1])) {
            err.add("wulff.ladder", "must be positive and strictly increasing");
            break;
        }
    }
    if (c.wulff.ladder.size() < 2) err.add("wulff.ladder", "needs at least two rungs");
    wul.get<int>("horizon", c.wulff.horizon,
                 [](const int& v) { return v >= 0; }, "must be >= 0");
    wul.get<int>("window", c.wulff.window,
                 [](const int& v) { return v >= 0; }, "must be >= 0");
    wul.finish();

    Section vl = section_of(root, "vlin", err, top_seen);
    vl.get<double>("delta", c.vlin.delta, delta_ok, "must lie in (0, 1/2]");
    vl.get_vec("times", c.vlin.times);
    for (size_t i = 0; i < c.vlin.times.size(); ++i) {
        if (c.vlin.times[i] <= 0.0 || (i > 0 && c.vlin.times[i] <= c.vlin.times[i - 1])) {
            err.add("vlin.times", "must be positive and strictly increasing");
            break;
        }
    }
    if (c.vlin.times.empty()) err.add("vlin.times", "needs at least one time");
    vl.get<double>("theta", c.vlin.theta, level_ok, "must lie in (0, 1]");
    vl.get_vec2("lo", c.vlin.lo);
    vl.get_vec2("hi", c.vlin.hi);
    if (!(c.vlin.lo.x < c.vlin.hi.x)) err.add("vlin.lo", "box must be nonempty");
    vl.finish();

    Section hom = section_of(root, "homogenize", err, top_seen);
    {
        HomogenizeConfig& hc = c.homogenize;
        hom.get<std::string>("region", hc.region.kind);
        if (hc.region.kind != "ball" && hc.region.kind != "box" && hc.region.kind != "box_union" &&
            hc.region.kind != "half_space" && hc.region.kind != "box_complement") {
            err.add("homogenize.region", "unknown region kind " + hc.region.kind);
        }
        hom.get_vec2("center", hc.region.center);
        hom.get<double>("radius", hc.region.radius, positive, "must be positive");
        hom.get_vec2("lo", hc.region.lo);
        hom.get_vec2("hi", hc.region.hi);
        hom.get_vec("boxes", hc.region.boxes);
        if (hc.region.boxes.size() % 4 != 0) {
            err.add("homogenize.boxes", "expected flattened [lo.x lo.y hi.x hi.y] groups");
        }
        hom.get_vec2("e", hc.region.e);
        hom.get<double>("offset", hc.region.offset);
        hom.get_vec("eps", hc.eps);
        for (size_t i = 0; i < hc.eps.size(); ++i) {
            if (hc.eps[i] <= 0.0 || (i > 0 && hc.eps[i] >= hc.eps[i - 1])) {
                err.add("homogenize.eps", "must be positive and strictly decreasing");
                break;
            }
        }
        if (hc.eps.empty()) err.add("homogenize.eps", "needs at least one rung");
        hom.get_vec("obs_times", hc.obs_times);
        for (size_t i = 0; i < hc.obs_times.size(); ++i) {
            if (hc.obs_times[i] < 0.0 || (i > 0 && hc.obs_times[i] <= hc.obs_times[i - 1])) {
                err.add("homogenize.obs_times", "must be >= 0 and strictly increasing");
                break;
            }
        }
        if (hc.obs_times.empty()) err.add("homogenize.obs_times", "needs at least one time");
        hom.get<double>("theta", hc.theta, level_ok, "must lie in (0, 1]");
        hom.get<double>("band", hc.band, non_negative, "must be >= 0");
        hom.get<double>("eta0", hc.eta0, unit_open, "must lie in (0, 1)");
        hom.get<double>("eta1", hc.eta1, unit_open, "must lie in (0, 1)");
        if (!(hc.eta0 < hc.eta1)) err.add("homogenize.eta0", "eta0 must be below eta1");
        hom.get<bool>("surrogate", hc.surrogate);
        hom.get_vec("shape_speeds", hc.shape_speeds);
        for (double w : hc.shape_speeds) {
            if (w <= 0.0) {
                err.add("homogenize.shape_speeds", "speeds must be positive");
                break;
            }
        }
        hom.get<int>("shape_directions", hc.shape_directions,
                     [](const int& v) { return v >= 2; }, "must be >= 2");
        // 1-D shapes always use the two axis directions
        size_t n_dirs = c.medium.dim == 1 ? 2 : static_cast<size_t>(hc.shape_directions);
        if (!hc.shape_speeds.empty() && hc.shape_speeds.size() != n_dirs) {
            err.add("homogenize.shape_speeds", "one speed per shape direction");
        }
        hom.get<double>("shape_front_T", hc.shape_front_T,
                        [](const double& v) { return v >= 4.0; }, "must be >= 4");
    }
    hom.finish();

    for (auto it = root.begin(); it != root.end(); ++it) {
        if (!top_seen.count(it.key())) err.add(it.key(), "unknown section");
    }

    err.raise_if_any();
    return c;
}

// Canonical form covers only what determines the results: physics, grid,
// seed, kind.  Plumbing (out, threads, parallel) is invocation detail and
// stays out so reruns of the same experiment hash identically.
std::string serialize_config(const RunConfig& c) {
    ordered_json j;
    j["run"] = {{"kind", c.kind},
                {"seed", c.seed},
                {"schema_version", c.schema_version}};
    j["grid"] = {{"h", c.h}};

    ordered_json med;
    med["generator"] = generator_name(c.medium.kind);
    med["dim"] = c.medium.dim;
    med["profile"] = profile_key(c.medium.profile);
    med["a11"] = c.medium.A.a11;
    med["a12"] = c.medium.A.a12;
    med["a22"] = c.medium.A.a22;
    med["b"] = jvec2(c.medium.b);
    med["fu0"] = c.medium.fu0;
    med["diffusion_law"] = json::array({c.medium.diffusion_law.lo, c.medium.diffusion_law.hi});
    if (!c.medium.diffusion_law.values.empty()) {
        med["diffusion_values"] = c.medium.diffusion_law.values;
    }
    med["fu0_law"] = json::array({c.medium.fu0_law.lo, c.medium.fu0_law.hi});
    if (!c.medium.fu0_law.values.empty()) med["fu0_values"] = c.medium.fu0_law.values;
    med["drift_amp"] = c.medium.drift_amp;
    med["mollify_radius"] = c.medium.mollify_radius;
    med["modes"] = c.medium.modes;
    med["contrast"] = c.medium.contrast;
    med["base_diffusion"] = c.medium.base_diffusion;
    med["base_fu0"] = c.medium.base_fu0;
    med["time_amp_diffusion"] = c.medium.time_amp_diffusion;
    med["time_amp_drift"] = c.medium.time_amp_drift;
    med["time_amp_fu0"] = c.medium.time_amp_fu0;
    j["medium"] = med;

    if (c.has_kernel) {
        j["kernel"] = {{"alpha", c.kernel.alpha},
                       {"tail", c.kernel.tail},
                       {"contrast", c.kernel.contrast},
                       {"mollify_radius", c.kernel.mollify_radius},
                       {"time_amp", c.kernel.time_amp}};
    }

    if (c.kind == "simulate") {
        ordered_json s;
        s["T"] = c.simulate.T;
        s["radius"] = c.simulate.radius;
        s["snapshots"] = c.simulate.snapshots;
        s["init"] = c.simulate.init.shape;
        s["level"] = c.simulate.init.level;
        if (c.simulate.init.shape == "ball") {
            s["center"] = jvec2(c.simulate.init.center);
            s["init_radius"] = c.simulate.init.radius;
        } else if (c.simulate.init.shape == "half_space") {
            s["e"] = jvec2(c.simulate.init.e);
            s["offset"] = c.simulate.init.offset;
        } else {
            s["lo"] = jvec2(c.simulate.init.lo);
            s["hi"] = jvec2(c.simulate.init.hi);
        }
        j["simulate"] = s;
    } else if (c.kind == "speed") {
        j["speed"] = {{"method", c.speed.method}, {"direction", jvec2(c.speed.direction)},
                      {"h_list", c.speed.h_list}, {"front_T", c.speed.front_T},
                      {"ladder", c.speed.ladder}, {"horizon", c.speed.horizon},
                      {"window", c.speed.window}};
    } else if (c.kind == "wulff") {
        j["wulff"] = {{"directions", c.wulff.directions},
                      {"ladder", c.wulff.ladder},
                      {"horizon", c.wulff.horizon},
                      {"window", c.wulff.window}};
    } else if (c.kind == "vlin") {
        j["vlin"] = {{"delta", c.vlin.delta},
                     {"times", c.vlin.times},
                     {"theta", c.vlin.theta},
                     {"lo", jvec2(c.vlin.lo)},
                     {"hi", jvec2(c.vlin.hi)}};
    } else if (c.kind == "homogenize") {
        const HomogenizeConfig& hc = c.homogenize;
        ordered_json s;
        s["region"] = hc.region.kind;
        if (hc.region.kind == "ball") {
            s["center"] = jvec2(hc.region.center);
            s["radius"] = hc.region.radius;
        } else if (hc.region.kind == "half_space") {
            s["e"] = jvec2(hc.region.e);
            s["offset"] = hc.region.offset;
        } else if (hc.region.kind == "box_union") {
            s["boxes"] = hc.region.boxes;
        } else {
            s["lo"] = jvec2(hc.region.lo);
            s["hi"] = jvec2(hc.region.hi);
        }
        s["eps"] = hc.eps;
        s["obs_times"] = hc.obs_times;
        s["theta"] = hc.theta;
        s["band"] = hc.band;
        s["eta0"] = hc.eta0;
        s["eta1"] = hc.eta1;
        s["surrogate"] = hc.surrogate;
        if (!hc.shape_speeds.empty()) s["shape_speeds"] = hc.shape_speeds;
        s["shape_directions"] = hc.shape_directions;
        s["shape_front_T"] = hc.shape_front_T;
        j["homogenize"] = s;
    }

    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& c) { return to_hex(fnv1a(serialize_config(c))); }

}  // namespace kpplab
