#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpplab/geometry.hpp"
#include "kpplab/medium.hpp"

// Run configuration: a flat-section JSON document mapped onto plain structs.
// Parsing validates everything it can see and reports every defect with its
// path; serialization is canonical (fixed key order, shortest round-trip
// numbers), so parse(serialize(c)) == c and the serialized bytes hash the
// run identity.

namespace kpplab {

struct InitSpec {
    std::string shape = "ball";  // ball | half_space | box
    double level = 0.5;
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    Vec2 e{1.0, 0.0};    // half_space: {x.e < offset}
    double offset = 0.0;
    Vec2 lo{0.0, 0.0}, hi{1.0, 1.0};
};

struct SimulateConfig {
    double T = 4.0;
    double radius = 0.0;  // solve domain radius; 0 = auto from the speed bound
    std::vector<double> snapshots;
    InitSpec init;
};

struct SpeedConfig {
    std::string method = "both";  // front | passage | both
    Vec2 direction{1.0, 0.0};
    std::vector<double> h_list;   // per-rung spacings; empty = {grid h}
    double front_T = 40.0;
    std::vector<int> ladder{64, 128, 256};
    int horizon = 0;  // passage cap; 0 = auto
    int window = 3;
};

struct WulffConfig {
    int directions = 32;
    std::vector<int> ladder{64, 128, 256};
    int horizon = 0;  // 0 = auto
    int window = 3;
};

struct VlinConfig {
    double delta = 0.2;
    std::vector<double> times{10.0, 20.0, 40.0};
    double theta = 0.5;
    Vec2 lo{0.0, 0.0}, hi{3.0, 3.0};  // u0 = theta on cells centered in [lo,hi)
};

struct RegionConfig {
    std::string kind = "ball";  // ball | box | box_union | half_space | box_complement
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    Vec2 lo{0.0, 0.0}, hi{1.0, 1.0};
    std::vector<double> boxes;  // box_union, flattened [lo.x lo.y hi.x hi.y]*
    Vec2 e{1.0, 0.0};
    double offset = 0.0;

    RegionSpec build(int dim) const;
};

struct HomogenizeConfig {
    RegionConfig region;
    std::vector<double> eps{1.0, 0.5, 0.25, 0.125};
    std::vector<double> obs_times{1.0};
    double theta = 0.5;
    double band = 0.1;
    double eta0 = 0.1;
    double eta1 = 0.9;
    bool surrogate = false;
    // reference shape: explicit speeds, or measured by front runs when empty
    std::vector<double> shape_speeds;      // one per shape direction
    int shape_directions = 16;
    double shape_front_T = 40.0;
};

struct RunConfig {
    int schema_version = 1;
    std::string kind = "validate";  // validate | simulate | speed | wulff | vlin | homogenize
    std::uint64_t seed = 1;
    std::string out;   // output directory; empty = <root>/<kind>-<hash8>
    int threads = 0;   // OpenMP team size; 0 = runtime default
    bool parallel = true;
    double h = 0.1;

    MediumParams medium;
    bool has_kernel = false;  // nonlocal diffusion (simulate and speed kinds)
    KernelParams kernel;

    SimulateConfig simulate;
    SpeedConfig speed;
    WulffConfig wulff;
    VlinConfig vlin;
    HomogenizeConfig homogenize;
};

// Throws ConfigError listing every defect, one "path: problem" line each.
RunConfig parse_config(const std::string& text);

// Canonical form: every section the kind uses, every key, fixed order.
std::string serialize_config(const RunConfig& c);

// FNV-1a of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& c);

const std::vector<std::string>& config_kinds();

}  // namespace kpplab
