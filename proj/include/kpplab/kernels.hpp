#pragma once
// Grid-update kernels.  Each stepper has an OpenMP-parallel driver and a
// plain serial reference driver; both call the same per-cell update, so
// their outputs are bit-identical and the reference guards the work
// distribution logic.  The benchmark target compares their throughput.

#include <vector>

#include "kpplab/medium.hpp"

namespace kpplab {

// Spatial coefficient planes for the local operator (time modulation is a
// scalar multiplier applied per step).
struct LocalPlanes {
    int dim = 1;
    int nx = 1, ny = 1;
    double h = 0.1;
    ReactionProfile profile = ReactionProfile::logistic;
    std::vector<double> a11, a12, a22, b1, b2, fu0;
    // Spatially constant coefficients: the drivers switch to a scalar path
    // that skips the six plane loads per cell (the update is memory bound).
    bool uniform = false;
    double ua11 = 0.0, ua12 = 0.0, ua22 = 0.0, ub1 = 0.0, ub2 = 0.0, ufu0 = 0.0;

    void detect_uniform();
};

struct LocalStepParams {
    double dt = 0.0;
    double mod_a = 1.0, mod_b = 1.0, mod_f = 1.0;
};

void local_step_serial(const LocalPlanes& p, const double* in, double* out,
                       const LocalStepParams& s);
void local_step_parallel(const LocalPlanes& p, const double* in, double* out,
                         const LocalStepParams& s);

// Jump quadrature tables for the nonlocal operator: half-space offsets with
// even pairing, base[k] = radial(|nu_k|) * h^dim.
struct NonlocalTables {
    int dim = 1;
    int nx = 1, ny = 1;
    double h = 0.1;
    ReactionProfile profile = ReactionProfile::logistic;
    std::vector<int> off_x, off_y;
    std::vector<double> base;
    std::vector<double> amp;   // spatial kernel amplitude per cell
    std::vector<double> fu0;   // spatial fu0 per cell
    bool uniform = false;      // as in LocalPlanes
    double uamp = 0.0, ufu0 = 0.0;

    void detect_uniform();
};

struct NonlocalStepParams {
    double dt = 0.0;
    double mod_amp = 1.0, mod_f = 1.0;
};

void nonlocal_step_serial(const NonlocalTables& p, const double* in, double* out,
                          const NonlocalStepParams& s);
void nonlocal_step_parallel(const NonlocalTables& p, const double* in, double* out,
                            const NonlocalStepParams& s);

}  // namespace kpplab
