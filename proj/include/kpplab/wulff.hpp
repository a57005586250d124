#pragma once
// First-passage campaigns and what they buy: spreading speeds on geometric
// ladders, limit-shape reconstruction from many directions, direct
// front-speed measurement against half-space data, and the sandwich probe
// that tests the shape against shifted point sources.
//
// A campaign solves once per distinct source point and watches every target
// from that run, stopping as soon as all of them resolve.  Domains are sized
// automatically from the target span and regrown on boundary activity, so
// results never depend on a lucky box choice.

#include <cstdint>
#include <vector>

#include "kpplab/geometry.hpp"
#include "kpplab/solver.hpp"

namespace kpplab {

inline constexpr int kUnresolved = -1;

struct PassageOptions {
    double h = 0.1;
    int horizon = 80;    // last integer time observed
    int window = 3;      // persistence window W
    double level = 0.5;  // occupation threshold and initial-data level
    double boundary_tolerance = 1e-6;
    double domain_radius = 0.0;  // 0 = auto from the target span
    bool parallel = true;
};

struct PassageEntry {
    Vec2 source{0.0, 0.0};
    Vec2 target{0.0, 0.0};
    int tau = kUnresolved;  // integer first-passage time
};

struct PassageTimeTable {
    int dim = 2;
    std::uint64_t seed = 0;
    int horizon = 0;
    int window = 0;
    std::vector<PassageEntry> entries;

    // index of the entry with these endpoints, or -1
    int find(Vec2 y, Vec2 z, double tol = 1e-9) const;
    int tau_of(Vec2 y, Vec2 z) const;  // throws SolverError if absent
};

// Crude front-speed overestimate used only for domain sizing.
double speed_guess(const MediumRealization& m);

// Runs level*chi_{B_1(y)} for every distinct source y and records, for each
// target z, the smallest integer t <= horizon - window with u(s) >= level on
// every cell centered in the closed unit ball around z for all integer
// s in [t, t + window]; kUnresolved if no such t exists below the horizon.
PassageTimeTable measure_passage(const MediumRealization& m, const std::vector<Vec2>& sources,
                                 const std::vector<Vec2>& targets,
                                 const PassageOptions& opt = {});

int first_passage(const MediumRealization& m, Vec2 y, Vec2 z, int horizon, int window,
                  PassageOptions opt = {});

struct Triple {
    Vec2 y, x, z;
};

struct SubadditivityReport {
    bool pass = true;
    int checked = 0;
    double slack = 0.0;          // allowed excess: window + 1
    double worst_excess = 0.0;   // max over triples of tau(y,z) - tau(y,x) - tau(x,z)
};

// All three legs of each triple must be present and resolved in the table.
SubadditivityReport subadditivity_check(const PassageTimeTable& table,
                                        const std::vector<Triple>& triples);

struct RegularityReport {
    bool pass = true;
    double fitted_C = 0.0;      // smallest C with tau <= C*(|y-z| + 1) on the table
    double slack = 0.0;         // window + 1
    long long pairs_checked = 0;
    long long violations = 0;   // pairs with |dtau| > 3C*(|dy|+|dz|+2) + slack
    double worst_excess = 0.0;
};

RegularityReport regularity_check(const PassageTimeTable& table);

struct SpeedEstimate {
    Vec2 e{1.0, 0.0};
    std::vector<int> ladder;     // rung distances n
    std::vector<int> taus;       // passage times tau(0, n*e)
    std::vector<double> values;  // n / tau
    double speed = 0.0;          // two-point extrapolation in 1/n from the last rungs
    double uncertainty = 0.0;    // |last - previous| rung value gap
};

// Single campaign from the origin with targets n*e; throws SolverError when
// a rung stays unresolved below the horizon.
SpeedEstimate spreading_speed(const MediumRealization& m, Vec2 e, const std::vector<int>& ladder,
                              const PassageOptions& opt = {});

struct WulffEstimate {
    ShapeFit fit;  // support values = extrapolated speeds, plus convexity defect
    std::vector<SpeedEstimate> speeds;
    double max_uncertainty = 0.0;
    double speed_cap = 0.0;  // plane-supersolution rate; every speed must sit below it
    bool within_cap = true;
};

// One campaign covers all directions and rungs at once (shared origin).
WulffEstimate estimate_wulff(const MediumRealization& m, const std::vector<Vec2>& directions,
                             const std::vector<int>& ladder, const PassageOptions& opt = {});

struct WulffEnsemble {
    std::vector<WulffEstimate> members;
    double spread = 0.0;  // max pairwise Hausdorff distance between member shapes
};

// Re-measures the shape on independent seeds of the same law.
WulffEnsemble wulff_ensemble(const MediumParams& params, const std::vector<std::uint64_t>& seeds,
                             const std::vector<Vec2>& directions, const std::vector<int>& ladder,
                             const PassageOptions& opt = {});

struct FrontOptions {
    double h = 0.1;
    double level = 0.5;
    double strip_halfwidth = 1.0;     // cross-section band used for the profile max
    double lateral_pad_factor = 1.2;  // wall padding in units of speed_guess * T
    double front_margin = 14.0;       // forward room kept ahead of the predicted front
    double back_length = 15.0;
    bool parallel = true;
};

struct FrontSpeedResult {
    Vec2 e{1.0, 0.0};
    double T = 0.0;
    double speed = 0.0;      // least-squares slope over integer times in [T/2, T]
    double intercept = 0.0;
    std::vector<double> positions;  // level-crossing position at integer times 0..T
};

// Half-space data level*chi_{x.e<0} on a slab aligned with e; the crossing
// position at time t is the largest center.e with u >= level among cells
// within strip_halfwidth of the axis.  Lateral walls are padded so reflected
// fronts cannot reach the strip before T; the run aborts with DomainTooSmall
// if the crossing comes within front_margin of the forward wall.
FrontSpeedResult front_speed_direct(const MediumRealization& m, Vec2 e, double T,
                                    const FrontOptions& opt = {});

// Same slab measurement under the nonlocal operator; the slab is sized by
// the stepper's own speed_bound since jumps outrun the local cone.
FrontSpeedResult front_speed_nonlocal(const MediumRealization& m, const KernelSpec& k, Vec2 e,
                                      double T, const FrontOptions& opt = {},
                                      const NonlocalOptions& nopt = {});

struct ShiftProbe {
    Vec2 shift{0.0, 0.0};
    bool inner_pass = true;        // u >= theta on the shrunk shape
    bool outer_pass = true;        // occupied cells inside the grown shape
    long long inner_violations = 0;
    long long outer_violations = 0;
};

struct StrongWulffReport {
    double t = 0.0;
    double delta = 0.0;
    double theta = 0.0;
    std::vector<ShiftProbe> shifts;
    double pass_fraction = 0.0;
};

// For each shift y: runs level*chi_{B_1(y)} to time t and checks the sandwich
// (1-delta)*t*S  within  {x : u(t, x+y) >= theta}  within  (1+delta)*t*S,
// with the inner inclusion certified on the shape's inscribed polygon and the
// outer one on its half-plane model.
StrongWulffReport strong_wulff_probe(const MediumRealization& m, const ConvexShape& shape,
                                     const std::vector<Vec2>& shifts, double t, double delta,
                                     double theta = 0.5, const PassageOptions& opt = {});

}  // namespace kpplab
