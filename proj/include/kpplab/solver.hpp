#pragma once
// Explicit monotone time steppers and the exact-landing integrator.
//
// Both steppers are positive-weight schemes under their CFL bound, so they
// preserve ordering of solutions and keep values in [0,1] with no clipping.
// solve() splits [t0, T] at every integer time, every observation time and
// T itself, takes equal substeps inside each segment, and assigns landing
// times exactly, so a run restarted at any landing point reproduces the
// original step sequence bit for bit.

#include <functional>
#include <memory>
#include <vector>

#include "kpplab/grid.hpp"
#include "kpplab/kernels.hpp"
#include "kpplab/medium.hpp"

namespace kpplab {

class TimeStepper {
  public:
    virtual ~TimeStepper() = default;
    virtual const Grid& grid() const = 0;
    virtual double max_dt() const = 0;
    // in.time supplies t; out must be a distinct field on the same grid.
    virtual void step(const Field& in, Field& out, double dt, bool parallel) const = 0;
};

// Largest dt with dt * (2*dim*supA/h^2 + sum_i sup|b_i|/h + Lip(f)) <= 1.
double cfl_dt(const Grid& g, const MediumRealization& m);

class LocalStepper final : public TimeStepper {
  public:
    LocalStepper(const Grid& g, const MediumRealization& m);
    const Grid& grid() const override { return grid_; }
    double max_dt() const override { return cfl_; }
    void step(const Field& in, Field& out, double dt, bool parallel) const override;

  private:
    Grid grid_;
    const MediumRealization* medium_;
    LocalPlanes planes_;
    double cfl_ = 0.0;
};

struct NonlocalOptions {
    double tail_tolerance = 1e-8;  // envelope tail cutoff exp(-alpha R) <= tol
};

class NonlocalStepper final : public TimeStepper {
  public:
    NonlocalStepper(const Grid& g, const KernelSpec& k, const MediumRealization& reaction_medium,
                    const NonlocalOptions& opt = {});
    const Grid& grid() const override { return grid_; }
    double max_dt() const override { return cfl_; }
    void step(const Field& in, Field& out, double dt, bool parallel) const override;

    double tail_radius() const { return tail_radius_; }
    // Rigorous spreading bound for this discrete scheme: min over decay
    // rates beta of [sup_amp * sum_nu w_nu (cosh(beta nu.e) - 1) + sup fu0]/beta.
    double speed_bound(Vec2 e) const;

  private:
    Grid grid_;
    const MediumRealization* medium_;
    const KernelSpec* kernel_;
    NonlocalTables tables_;
    double cfl_ = 0.0;
    double tail_radius_ = 0.0;
};

// One-shot forms of the two update operators.
Field step_local(const Field& u, const MediumRealization& m, double dt);
Field step_nonlocal(const Field& u, const KernelSpec& k, const MediumRealization& reaction_medium,
                    double dt);

struct SolveOptions {
    std::vector<double> observe_times;  // snapshots to record, within [t0, T]
    // called at integer landing times; returning false stops the run there
    std::function<bool(const Field&)> integer_probe;
    bool parallel = true;
    double boundary_tolerance = -1.0;  // if >= 0, boundary activity check at landings
};

struct SolveResult {
    Field final;
    std::vector<Field> snapshots;
};

SolveResult solve(const Field& u0, const TimeStepper& stepper, double T,
                  const SolveOptions& opt = {});

// Supersolution machinery: a = gamma*(1 + d + d^2) with gamma the largest of
// the coefficient sup norms.
double supersolution_rate(const MediumRealization& m);

// Safe truncation radius for data supported in B_{r0}: r0 + a*T plus a
// margin with exp(-margin) = tail_tolerance.
double truncation_radius(double r0, double T, const MediumRealization& m,
                         double tail_tolerance = 1e-8);

// Checks u(t,x) <= exp(a*t - (x-x0).e) on every snapshot; returns false with
// the worst margin if the plane-wave bound is violated.
struct SupersolutionReport {
    bool pass = true;
    double worst_excess = 0.0;  // max of u - bound over all snapshots
    double at_time = 0.0;
};
SupersolutionReport supersolution_check(const std::vector<Field>& snapshots, Vec2 e, Vec2 x0,
                                        double a, double tol = 1e-9);

}  // namespace kpplab
