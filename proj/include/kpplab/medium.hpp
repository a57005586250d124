#pragma once
// Random coefficient fields for the reaction-advection-diffusion problem.
//
// A realization bundles the diffusion matrix A(t,x), drift b(t,x) and the
// reaction linearization slope fu0(t,x), all 1-periodic in t.  Spatial
// structure comes from one of three generators (homogeneous constants,
// mollified i.i.d. checkerboard, random-phase cosine sums); time dependence
// is a smooth 1-periodic modulation factored out of the spatial part, so
// coefficient(t,x) = modulation(t) * spatial(x) exactly.  Spatial
// stationarity is realized through an additive shift: shifting the medium by
// y and evaluating at x gives the same arithmetic as evaluating the original
// at x + y.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kpplab/common.hpp"

namespace kpplab {

// ---------------------------------------------------------------- reactions

enum class ReactionProfile { logistic, min_cut, quadratic_degenerate };

// g(u) for u in [0,1]; out-of-range arguments are a domain error.
double profile_value(ReactionProfile p, double u);
const char* profile_name(ReactionProfile p);

// ------------------------------------------------------ time modulation law

// Smooth 1-periodic factor in [1-amp, 1], equal to 1 at integer times.
inline double time_modulation(double amp, double t) {
    double f = fract(t);
    return 1.0 - amp * 0.5 * (1.0 - std::cos(6.283185307179586476925286766559 * f));
}

// --------------------------------------------------- checkerboard machinery

// Scalar values per unit cell of the integer lattice.  Either a discrete
// list (cells pick one value uniformly) or a continuous uniform range.
struct ValueLaw {
    std::vector<double> values;  // when non-empty, the discrete case
    double lo = 1.0, hi = 1.0;

    double min() const;
    double max() const;
    double mean() const;
    double draw(std::uint64_t h) const;
};

// One mollified checkerboard scalar field: i.i.d. cell values, a global
// uniform lattice offset, and a fixed C-infinity blend of width 2*radius
// across cell faces.  Values stay inside [law.min, law.max] because the
// blend is a convex combination.
struct CheckerField {
    std::uint64_t seed = 0;
    std::uint32_t tag = 0;  // distinguishes coefficient fields sharing a seed
    ValueLaw law;
    Vec2 lattice_offset;    // global stationarizing shift in [0,1)^d
    double mollify_radius = 0.1;
    int dim = 1;

    double cell_value(long long n1, long long n2) const;
    double eval(Vec2 p) const;
};

// ------------------------------------------------------- fourier machinery

struct FourierMode {
    Vec2 freq;      // integer frequency vector
    double amp;     // amplitude
    double phase;   // uniform in [0, 2pi)
};

struct FourierField {
    double base = 1.0;
    std::vector<FourierMode> modes;  // sum of |amp| <= contrast
    double eval(Vec2 p) const;
};

// ------------------------------------------------------------ medium proper

enum class GeneratorKind { homogeneous, checkerboard, fourier };

struct MediumParams {
    GeneratorKind kind = GeneratorKind::homogeneous;
    int dim = 1;

    // homogeneous: coefficients given directly
    SymMat2 A;
    Vec2 b;
    double fu0 = 1.0;

    // checkerboard laws
    ValueLaw diffusion_law{{}, 1.0, 1.0};
    ValueLaw fu0_law{{}, 1.0, 1.0};
    double drift_amp = 0.0;       // drift cell values uniform in [-amp, amp]
    double mollify_radius = 0.1;

    // fourier
    int modes = 3;
    double contrast = 0.2;        // relative oscillation of each field
    double base_diffusion = 1.0;
    double base_fu0 = 1.0;

    // smooth 1-periodic time modulation amplitudes, in [0,1)
    double time_amp_diffusion = 0.0;
    double time_amp_drift = 0.0;
    double time_amp_fu0 = 0.0;

    ReactionProfile profile = ReactionProfile::logistic;
};

struct CoeffSample {
    SymMat2 A;
    Vec2 b;
    double fu0 = 1.0;
};

class MediumRealization {
  public:
    int dim = 1;
    std::uint64_t seed = 0;
    MediumParams params;
    Vec2 shift;  // accumulated stationarity shift

    // exact coefficient bounds implied by the generator laws
    double lambda = 1.0;    // A >= lambda * I everywhere
    double sup_A = 1.0;     // max over entries and (t,x)
    double sup_b1 = 0.0, sup_b2 = 0.0;
    double inf_fu0 = 1.0, sup_fu0 = 1.0;

    // spatial parts (before time modulation)
    SymMat2 A_space(Vec2 x) const;
    Vec2 b_space(Vec2 x) const;
    double fu0_space(Vec2 x) const;

    double mod_diffusion(double t) const { return time_modulation(params.time_amp_diffusion, t); }
    double mod_drift(double t) const { return time_modulation(params.time_amp_drift, t); }
    double mod_fu0(double t) const { return time_modulation(params.time_amp_fu0, t); }

    CoeffSample eval(double t, Vec2 x) const;

    double fu0_at(double t, Vec2 x) const { return mod_fu0(t) * fu0_space(shifted(x)); }
    // f(t,x,u) = fu0(t,x) * g(u)
    double reaction(double t, Vec2 x, double u) const;
    double reaction_lipschitz() const { return sup_fu0; }

    ReactionProfile profile() const { return params.profile; }
    Vec2 shifted(Vec2 x) const { return x + shift; }

  private:
    CheckerField cb_diff_, cb_b1_, cb_b2_, cb_fu0_;
    FourierField fr_diff_, fr_fu0_;
    friend MediumRealization sample_medium(const MediumParams&, std::uint64_t);
};

MediumRealization sample_medium(const MediumParams& p, std::uint64_t seed);

// Copy whose coefficient fields are those of m translated by y.
MediumRealization shift_medium(const MediumRealization& m, Vec2 y);

// Derived KPP surrogate: same fu0, profile replaced by min{u, 1-u}.
MediumRealization kpp_surrogate(const MediumRealization& m);

// ------------------------------------------------------------- reaction view

// Separable reaction f(t,x,u) = fu0(t,x) * g(u) as seen by the validator.
struct ReactionSpec {
    const MediumRealization* medium = nullptr;
    ReactionProfile profile = ReactionProfile::logistic;
    double lipschitz = 1.0;

    double fu0(double t, Vec2 x) const { return medium->fu0_at(t, x); }
    double g(double u) const { return profile_value(profile, u); }
    double f(double t, Vec2 x, double u) const { return fu0(t, x) * g(u); }
};

ReactionSpec reaction_of(const MediumRealization& m);

// -------------------------------------------------------------- validators

struct ConditionResult {
    std::string name;
    bool pass = true;
    std::string witness;  // worst sampled violation, empty if none
};

struct ValidationReport {
    std::vector<ConditionResult> conditions;
    bool all_pass() const;
    std::string summary() const;
};

// Definition of a KPP reaction, condition by condition, on sample sets.
ValidationReport validate_kpp(const ReactionSpec& r,
                              const std::vector<double>& u_samples,
                              const std::vector<std::pair<double, Vec2>>& tx_samples);

// Strict inequality sup|b|^2 < 4*lambda*inf fu0 over a deterministic sample
// cloud drawn from the medium seed.
struct DriftBoundReport {
    double sup_b_sq = 0.0;
    double bound = 0.0;  // 4*lambda*inf fu0 over the samples
    bool pass = false;
};
DriftBoundReport validate_drift_bound(const MediumRealization& m);

// Sampled ellipticity: min eigenvalue of A(t,x) >= lambda - tol.
bool validate_ellipticity(const MediumRealization& m, double tol = 1e-12);

// --------------------------------------------------------------- kernels

// Jump kernel K(t,x,nu), even in nu, with envelope bracket
//   alpha*env(|nu|) <= K <= (1/alpha)*max{env(|nu|), exp(-alpha*|nu|)},
//   chi_(0,alpha](r) <= env(r) <= chi_(0,alpha](r) * r^(-dim-2+alpha).
struct KernelSpec {
    int dim = 1;
    double alpha = 1.0;
    std::function<double(double)> envelope;
    std::function<double(double, Vec2, Vec2)> K;  // (t, x, nu)

    // separable fast path K = amp(t,x) * radial(|nu|); amp in [alpha, 1/alpha]
    bool separable = false;
    std::function<double(double, Vec2)> amp;
    std::function<double(double)> radial;
    double amp_sup = 1.0;
    double time_amp = 0.0;  // amp(t,x) = time_modulation(time_amp,t) * amp(0,x)

    bool has_tail = false;  // exponential tail beyond radius alpha
};

struct KernelParams {
    int dim = 1;
    double alpha = 1.0;
    bool tail = false;          // add max(core, e^{-r}) tail
    double contrast = 0.5;      // amp cells span [alpha^c, alpha^-c], c = contrast
    double mollify_radius = 0.1;
    double time_amp = 0.0;
};

// Checkerboard-modulated radial kernel: K = c(t,x) * core(|nu|) with
// c in [alpha, 1/alpha].
KernelSpec make_checkerboard_kernel(const KernelParams& p, std::uint64_t seed);

ValidationReport validate_kernel(const KernelSpec& k,
                                 const std::vector<std::pair<double, Vec2>>& tx_samples);

}  // namespace kpplab
