#pragma once

#include <functional>
#include <vector>

#include "kpplab/geometry.hpp"
#include "kpplab/grid.hpp"
#include "kpplab/medium.hpp"

// Front-to-back experiments.  Three measurements sit on top of the solver:
// a sandwich check that brackets a general solution between shifted unions
// of single-cube solutions of the cutoff reaction, a scaling sweep that
// compares snapshots against the grown reference set across a ladder of
// epsilons, and a hair-trigger clock for how long a level-theta ball datum
// needs to saturate.

namespace kpplab {

// ------------------------------------------------------- cube decomposition

// Restriction of a field to the unit cube (n1,n1+1) x (n2,n2+1) (n2 ignored
// in dimension 1).  The piece lives on a minimal aligned subgrid; cells keep
// their absolute centers, so value_at agrees with the parent field inside the
// cube and is zero outside.
struct CubePiece {
    int n1 = 0;
    int n2 = 0;
    Field u;
};

// Splits u0 by the integer lattice: each cell goes to the cube containing
// its center.  Pieces have disjoint supports, so both the sum and the
// pointwise max of the pieces reproduce u0.  Only cubes holding a nonzero
// cell produce a piece; more than cap pieces is an error.
std::vector<CubePiece> cube_decomposition(const Field& u0, int cap = 4096);

// -------------------------------------------------- virtual linearity check

struct SandwichOptions {
    double boundary_pad = 21.0;  // extra radius past the speed cone
    int cube_cap = 4096;
    bool parallel = true;
};

struct SandwichTime {
    double t = 0.0;
    double left_margin = 0.0;   // min_x [ u(t,x) - max_n u'_n(t - delta*t, x) ]
    double right_margin = 0.0;  // min_x [ max_n u'_n(t + delta*t, x) - u(t,x) ]
    double phi_hat = 0.0;       // max(0, -min(left, right))
};

struct SandwichReport {
    double delta = 0.0;
    std::vector<SandwichTime> times;
    double worst_phi_hat() const;
};

// Solves u from u0 under m and every cube piece of u0 under the cutoff
// surrogate of m, then measures how far u escapes the time-shifted envelope
// max_n u'_n at each requested time.  Caller guarantees the drift bound;
// delta must lie in (0, 1/2], times must be positive and increasing.
SandwichReport virtual_linearity_check(const Field& u0, const MediumRealization& m,
                                       const std::vector<double>& times, double delta,
                                       const SandwichOptions& opt = {});

// ------------------------------------------------------ homogenization sweep

struct SweepParams {
    RegionSpec region;                       // initial set G
    ConvexShape shape;                       // reference speed profile
    std::vector<double> eps_list;            // strictly decreasing, positive
    std::vector<double> obs_times;           // scaled times, positive ascending
    std::vector<Vec2> shifts;                // y_eps per rung; empty = origin
    std::function<double(double)> rho;       // sandwich collar; default sqrt
    double theta = 0.5;                      // initial level
    double band = 0.1;
    double eta0 = 0.1;
    double eta1 = 0.9;
    double h = 0.1;                          // unscaled grid spacing
    bool use_surrogate = false;              // run the cutoff reaction instead
    bool parallel = true;
};

struct SweepObservation {
    double time = 0.0;  // scaled
    MixedZoneResult zone;
};

struct EpsRecord {
    double eps = 0.0;
    double rho = 0.0;
    Vec2 shift{0.0, 0.0};
    double window = 0.0;       // scaled scoring radius; 0 = whole grid
    double truncation = 0.0;   // scaled data cutoff for unbounded regions; 0 = none
    std::vector<SweepObservation> obs;
};

struct SweepRecord {
    double theta = 0.0;
    double band = 0.0;
    double eta0 = 0.0;
    double eta1 = 0.0;
    std::vector<EpsRecord> per_eps;
};

// For each eps runs one unscaled solve from theta times the indicator of
// eps^{-1}(G + y_eps), observes at t/eps, and scores each snapshot against
// G + t*S in the scaled frame xi = eps*x - y_eps.  Unbounded regions are
// truncated at radius (2 + 1/a)*M and scored only inside the window |xi| <= M,
// a the supersolution rate and M the largest radius the observations reach.
SweepRecord homogenization_sweep(const MediumRealization& m, const SweepParams& p);

// ----------------------------------------------------------- hair trigger

struct HairTriggerOptions {
    double h = 0.1;
    int horizon = 60;
    bool parallel = true;
};

// First integer time at which the solution from theta on the unit ball stays
// at or above 1 - eta on that ball for a full period.  Monotone nonincreasing
// in theta; theta = 1 gives 0.  Throws HorizonExceeded when the horizon ends
// before the level holds.
int hair_trigger_time(const MediumRealization& m, double theta, double eta,
                      const HairTriggerOptions& opt = {});

}  // namespace kpplab
