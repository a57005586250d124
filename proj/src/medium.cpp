#include "kpplab/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kpplab {

// ---------------------------------------------------------------- reactions

double profile_value(ReactionProfile p, double u) {
    if (u < 0.0 || u > 1.0) {
        throw std::domain_error("reaction profile evaluated outside [0,1]: u=" + format_double(u));
    }
    switch (p) {
        case ReactionProfile::logistic: return u * (1.0 - u);
        case ReactionProfile::min_cut: return std::min(u, 1.0 - u);
        case ReactionProfile::quadratic_degenerate: return u * u * (1.0 - u);
    }
    return 0.0;
}

const char* profile_name(ReactionProfile p) {
    switch (p) {
        case ReactionProfile::logistic: return "logistic";
        case ReactionProfile::min_cut: return "min-cut";
        case ReactionProfile::quadratic_degenerate: return "quadratic-degenerate";
    }
    return "?";
}

// ----------------------------------------------------------------- ValueLaw

double ValueLaw::min() const {
    if (!values.empty()) return *std::min_element(values.begin(), values.end());
    return lo;
}

double ValueLaw::max() const {
    if (!values.empty()) return *std::max_element(values.begin(), values.end());
    return hi;
}

double ValueLaw::mean() const {
    if (!values.empty()) {
        return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    return 0.5 * (lo + hi);
}

double ValueLaw::draw(std::uint64_t h) const {
    if (!values.empty()) return values[h % values.size()];
    return lo + (hi - lo) * u01(h);
}

// ------------------------------------------------------------- CheckerField

namespace {

// C-infinity ramp from 0 to 1 with flat ends.
double bump_half(double s) { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s); }
double smooth_ramp(double s) {
    double a = bump_half(s);
    double b = bump_half(1.0 - s);
    return a / (a + b);
}

struct AxisBlend {
    long long cell[2];
    double w[2];
    int count;
};

// Blend of width 2r across each cell face; single cell in the flat interior.
AxisBlend axis_blend(double xi, double r) {
    double nf = std::floor(xi);
    long long n = static_cast<long long>(nf);
    double f = xi - nf;
    AxisBlend out;
    if (f < r) {
        double w = smooth_ramp((f + r) / (2.0 * r));
        out.cell[0] = n - 1;
        out.cell[1] = n;
        out.w[0] = 1.0 - w;
        out.w[1] = w;
        out.count = 2;
    } else if (f > 1.0 - r) {
        double w = smooth_ramp((f - (1.0 - r)) / (2.0 * r));
        out.cell[0] = n;
        out.cell[1] = n + 1;
        out.w[0] = 1.0 - w;
        out.w[1] = w;
        out.count = 2;
    } else {
        out.cell[0] = n;
        out.w[0] = 1.0;
        out.count = 1;
    }
    return out;
}

}  // namespace

double CheckerField::cell_value(long long n1, long long n2) const {
    std::uint64_t h = hash_combine(seed, tag);
    h = hash_combine(h, static_cast<std::uint64_t>(n1));
    h = hash_combine(h, static_cast<std::uint64_t>(n2));
    return law.draw(h);
}

double CheckerField::eval(Vec2 p) const {
    AxisBlend bx = axis_blend(p.x - lattice_offset.x, mollify_radius);
    if (dim == 1) {
        double v = 0.0;
        for (int i = 0; i < bx.count; ++i) v += bx.w[i] * cell_value(bx.cell[i], 0);
        return v;
    }
    AxisBlend by = axis_blend(p.y - lattice_offset.y, mollify_radius);
    double v = 0.0;
    for (int i = 0; i < bx.count; ++i) {
        for (int j = 0; j < by.count; ++j) {
            v += bx.w[i] * by.w[j] * cell_value(bx.cell[i], by.cell[j]);
        }
    }
    return v;
}

// ------------------------------------------------------------- FourierField

double FourierField::eval(Vec2 p) const {
    double s = 1.0;
    for (const FourierMode& m : modes) {
        s += m.amp * std::cos(6.283185307179586476925286766559 * dot(m.freq, p) + m.phase);
    }
    return base * s;
}

// ---------------------------------------------------------- medium sampling

MediumRealization sample_medium(const MediumParams& p, std::uint64_t seed) {
    if (p.dim != 1 && p.dim != 2) throw std::invalid_argument("medium dimension must be 1 or 2");
    for (double amp : {p.time_amp_diffusion, p.time_amp_drift, p.time_amp_fu0}) {
        if (amp < 0.0 || amp >= 1.0) throw std::invalid_argument("time modulation amplitude must be in [0,1)");
    }

    MediumRealization m;
    m.dim = p.dim;
    m.seed = seed;
    m.params = p;
    m.shift = {0.0, 0.0};

    double mod_min_diff = 1.0 - p.time_amp_diffusion;
    double mod_min_fu0 = 1.0 - p.time_amp_fu0;

    switch (p.kind) {
        case GeneratorKind::homogeneous: {
            if (p.dim == 2 && std::fabs(p.A.a12) > std::min(p.A.a11, p.A.a22)) {
                throw std::invalid_argument("homogeneous medium: |A12| must not exceed A11 and A22");
            }
            m.lambda = mod_min_diff * p.A.min_eigenvalue(p.dim);
            m.sup_A = p.A.max_abs_entry(p.dim);
            m.sup_b1 = std::fabs(p.b.x);
            m.sup_b2 = p.dim == 2 ? std::fabs(p.b.y) : 0.0;
            m.inf_fu0 = mod_min_fu0 * p.fu0;
            m.sup_fu0 = p.fu0;
            break;
        }
        case GeneratorKind::checkerboard: {
            if (p.diffusion_law.min() <= 0.0) throw std::invalid_argument("checkerboard diffusion law must be positive");
            if (p.fu0_law.min() <= 0.0) throw std::invalid_argument("checkerboard fu0 law must be positive");
            RngStream rs(hash_combine(seed, 0xC0FFEEULL));
            Vec2 off{rs.next_u01(), p.dim == 2 ? rs.next_u01() : 0.0};
            ValueLaw drift_law{{}, -p.drift_amp, p.drift_amp};
            m.cb_diff_ = CheckerField{seed, 1, p.diffusion_law, off, p.mollify_radius, p.dim};
            m.cb_b1_ = CheckerField{seed, 2, drift_law, off, p.mollify_radius, p.dim};
            m.cb_b2_ = CheckerField{seed, 3, drift_law, off, p.mollify_radius, p.dim};
            m.cb_fu0_ = CheckerField{seed, 4, p.fu0_law, off, p.mollify_radius, p.dim};
            m.lambda = mod_min_diff * p.diffusion_law.min();
            m.sup_A = p.diffusion_law.max();
            m.sup_b1 = p.drift_amp;
            m.sup_b2 = p.dim == 2 ? p.drift_amp : 0.0;
            m.inf_fu0 = mod_min_fu0 * p.fu0_law.min();
            m.sup_fu0 = p.fu0_law.max();
            break;
        }
        case GeneratorKind::fourier: {
            if (p.contrast < 0.0 || p.contrast >= 1.0) throw std::invalid_argument("fourier contrast must be in [0,1)");
            auto draw_modes = [&](std::uint64_t tag) {
                FourierField f;
                RngStream rs(hash_combine(seed, tag));
                int n = std::max(1, p.modes);
                std::vector<double> raw(n);
                double total = 0.0;
                for (double& x : raw) {
                    x = 0.1 + rs.next_u01();
                    total += x;
                }
                for (int k = 0; k < n; ++k) {
                    FourierMode mode;
                    do {
                        mode.freq.x = std::floor(rs.next_in(-3.0, 4.0));
                        mode.freq.y = p.dim == 2 ? std::floor(rs.next_in(-3.0, 4.0)) : 0.0;
                    } while (mode.freq.x == 0.0 && mode.freq.y == 0.0);
                    mode.amp = p.contrast * raw[k] / total;
                    mode.phase = rs.next_in(0.0, 6.283185307179586476925286766559);
                    f.modes.push_back(mode);
                }
                return f;
            };
            m.fr_diff_ = draw_modes(0xD1FFULL);
            m.fr_diff_.base = p.base_diffusion;
            m.fr_fu0_ = draw_modes(0xF00ULL);
            m.fr_fu0_.base = p.base_fu0;
            m.lambda = mod_min_diff * p.base_diffusion * (1.0 - p.contrast);
            m.sup_A = p.base_diffusion * (1.0 + p.contrast);
            m.sup_b1 = 0.0;
            m.sup_b2 = 0.0;
            m.inf_fu0 = mod_min_fu0 * p.base_fu0 * (1.0 - p.contrast);
            m.sup_fu0 = p.base_fu0 * (1.0 + p.contrast);
            break;
        }
    }
    return m;
}

SymMat2 MediumRealization::A_space(Vec2 x) const {
    switch (params.kind) {
        case GeneratorKind::homogeneous: {
            SymMat2 a = params.A;
            if (dim == 1) {
                a.a12 = 0.0;
                a.a22 = a.a11;
            }
            return a;
        }
        case GeneratorKind::checkerboard: {
            double a = cb_diff_.eval(x);
            return SymMat2{a, 0.0, a};
        }
        case GeneratorKind::fourier: {
            double a = fr_diff_.eval(x);
            return SymMat2{a, 0.0, a};
        }
    }
    return {};
}

Vec2 MediumRealization::b_space(Vec2 x) const {
    switch (params.kind) {
        case GeneratorKind::homogeneous:
            return dim == 2 ? params.b : Vec2{params.b.x, 0.0};
        case GeneratorKind::checkerboard:
            return {cb_b1_.eval(x), dim == 2 ? cb_b2_.eval(x) : 0.0};
        case GeneratorKind::fourier:
            return {0.0, 0.0};
    }
    return {};
}

double MediumRealization::fu0_space(Vec2 x) const {
    switch (params.kind) {
        case GeneratorKind::homogeneous: return params.fu0;
        case GeneratorKind::checkerboard: return cb_fu0_.eval(x);
        case GeneratorKind::fourier: return fr_fu0_.eval(x);
    }
    return 1.0;
}

CoeffSample MediumRealization::eval(double t, Vec2 x) const {
    Vec2 p = shifted(x);
    double md = mod_diffusion(t);
    double mb = mod_drift(t);
    double mf = mod_fu0(t);
    SymMat2 a = A_space(p);
    Vec2 b = b_space(p);
    return CoeffSample{SymMat2{a.a11 * md, a.a12 * md, a.a22 * md},
                       Vec2{b.x * mb, b.y * mb},
                       fu0_space(p) * mf};
}

double MediumRealization::reaction(double t, Vec2 x, double u) const {
    return fu0_at(t, x) * profile_value(params.profile, u);
}

MediumRealization shift_medium(const MediumRealization& m, Vec2 y) {
    MediumRealization out = m;
    out.shift = m.shift + y;
    return out;
}

MediumRealization kpp_surrogate(const MediumRealization& m) {
    MediumRealization out = m;
    out.params.profile = ReactionProfile::min_cut;
    return out;
}

ReactionSpec reaction_of(const MediumRealization& m) {
    return ReactionSpec{&m, m.profile(), m.reaction_lipschitz()};
}

// -------------------------------------------------------------- validators

bool ValidationReport::all_pass() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const ConditionResult& c) { return c.pass; });
}

std::string ValidationReport::summary() const {
    std::string s;
    for (const ConditionResult& c : conditions) {
        s += (c.pass ? "[pass] " : "[FAIL] ");
        s += c.name;
        if (!c.witness.empty()) s += " (" + c.witness + ")";
        s += "\n";
    }
    return s;
}

ValidationReport validate_kpp(const ReactionSpec& r,
                              const std::vector<double>& u_samples,
                              const std::vector<std::pair<double, Vec2>>& tx_samples) {
    ValidationReport rep;
    auto add = [&](std::string name, bool pass, std::string witness) {
        rep.conditions.push_back({std::move(name), pass, std::move(witness)});
    };

    double g0 = r.g(0.0);
    double g1 = r.g(1.0);
    add("endpoints-vanish", g0 == 0.0 && g1 == 0.0,
        "g(0)=" + format_double(g0) + " g(1)=" + format_double(g1));

    double inf_fu0 = std::numeric_limits<double>::infinity();
    double sup_fu0 = 0.0;
    for (const auto& [t, x] : tx_samples) {
        double v = r.fu0(t, x);
        inf_fu0 = std::min(inf_fu0, v);
        sup_fu0 = std::max(sup_fu0, v);
    }
    add("positive-fu0-infimum", inf_fu0 > 0.0, "inf fu0=" + format_double(inf_fu0));

    double min_interior_g = std::numeric_limits<double>::infinity();
    double max_excess = -std::numeric_limits<double>::infinity();
    for (double u : u_samples) {
        double g = r.g(u);
        if (u > 0.0 && u < 1.0) min_interior_g = std::min(min_interior_g, g);
        max_excess = std::max(max_excess, g - u);
    }
    add("positive-in-interior", min_interior_g > 0.0, "min g=" + format_double(min_interior_g));
    add("dominated-by-linearization", max_excess <= 1e-15, "max g(u)-u=" + format_double(max_excess));

    // slope and uniform limit from the decreasing tail of the u samples
    std::vector<double> tail = u_samples;
    std::sort(tail.begin(), tail.end(), std::greater<>());
    while (!tail.empty() && tail.back() <= 0.0) tail.pop_back();
    double u_min = tail.empty() ? 1e-8 : tail.back();
    double slope = r.g(u_min) / u_min;
    add("positive-linearization-slope", inf_fu0 * slope >= 1e-6,
        "inf fu0*g'(0)~" + format_double(inf_fu0 * slope));

    double limit_gap = sup_fu0 * (1.0 - slope);
    add("uniform-linearization-limit", limit_gap <= 1e-6,
        "sup fu0*(1-g(u)/u) at u=" + format_double(u_min) + ": " + format_double(limit_gap));

    return rep;
}

namespace {

std::vector<std::pair<double, Vec2>> medium_sample_cloud(const MediumRealization& m,
                                                         std::uint64_t salt, int n_t, int n_x) {
    std::vector<std::pair<double, Vec2>> out;
    RngStream rs(hash_combine(m.seed, salt));
    for (int i = 0; i < n_t; ++i) {
        double t = rs.next_u01();
        for (int j = 0; j < n_x; ++j) {
            Vec2 x{rs.next_in(-8.0, 8.0), m.dim == 2 ? rs.next_in(-8.0, 8.0) : 0.0};
            out.emplace_back(t, x);
        }
    }
    return out;
}

}  // namespace

DriftBoundReport validate_drift_bound(const MediumRealization& m) {
    DriftBoundReport rep;
    double inf_fu0 = std::numeric_limits<double>::infinity();
    for (const auto& [t, x] : medium_sample_cloud(m, 0xD21F7ULL, 16, 256)) {
        CoeffSample c = m.eval(t, x);
        double b2 = c.b.x * c.b.x + (m.dim == 2 ? c.b.y * c.b.y : 0.0);
        rep.sup_b_sq = std::max(rep.sup_b_sq, b2);
        inf_fu0 = std::min(inf_fu0, c.fu0);
    }
    rep.bound = 4.0 * m.lambda * inf_fu0;
    rep.pass = rep.sup_b_sq < rep.bound;
    return rep;
}

bool validate_ellipticity(const MediumRealization& m, double tol) {
    for (const auto& [t, x] : medium_sample_cloud(m, 0xE111ULL, 8, 256)) {
        CoeffSample c = m.eval(t, x);
        if (c.A.min_eigenvalue(m.dim) < m.lambda - tol) return false;
        if (m.dim == 2 && std::fabs(c.A.a12) > std::min(c.A.a11, c.A.a22) + tol) return false;
    }
    return true;
}

// --------------------------------------------------------------- kernels

KernelSpec make_checkerboard_kernel(const KernelParams& p, std::uint64_t seed) {
    if (p.alpha <= 0.0 || p.alpha > 1.0) throw std::invalid_argument("kernel alpha must be in (0,1]");
    if (p.contrast < 0.0 || p.contrast > 1.0) throw std::invalid_argument("kernel contrast must be in [0,1]");
    double amp_lo = std::pow(p.alpha, p.contrast);
    double amp_hi = std::pow(p.alpha, -p.contrast);
    if ((1.0 - p.time_amp) * amp_lo < p.alpha) {
        throw std::invalid_argument("kernel time modulation pushes amplitude below alpha");
    }

    KernelSpec k;
    k.dim = p.dim;
    k.alpha = p.alpha;
    k.has_tail = p.tail;

    double alpha = p.alpha;
    int dim = p.dim;
    auto core = [alpha, dim](double r) {
        if (r <= 0.0 || r > alpha) return 0.0;
        return std::pow(r, -(dim + 2) + alpha);
    };
    k.envelope = core;
    if (p.tail) {
        k.radial = [core](double r) { return std::max(core(r), r > 0.0 ? std::exp(-r) : 0.0); };
    } else {
        k.radial = core;
    }

    RngStream rs(hash_combine(seed, 0x6E57ULL));
    Vec2 off{rs.next_u01(), p.dim == 2 ? rs.next_u01() : 0.0};
    CheckerField amp_field{seed, 7, ValueLaw{{}, amp_lo, amp_hi}, off, p.mollify_radius, p.dim};
    double time_amp = p.time_amp;
    k.amp = [amp_field, time_amp](double t, Vec2 x) {
        return time_modulation(time_amp, t) * amp_field.eval(x);
    };
    k.amp_sup = amp_hi;
    k.separable = true;
    k.time_amp = p.time_amp;

    auto radial = k.radial;
    auto amp = k.amp;
    k.K = [amp, radial](double t, Vec2 x, Vec2 nu) { return amp(t, x) * radial(norm(nu)); };
    return k;
}

ValidationReport validate_kernel(const KernelSpec& k,
                                 const std::vector<std::pair<double, Vec2>>& tx_samples) {
    ValidationReport rep;
    auto add = [&](std::string name, bool pass, std::string witness) {
        rep.conditions.push_back({std::move(name), pass, std::move(witness)});
    };
    double a = k.alpha;
    std::vector<double> radii = {1e-6 * a, 1e-3 * a, 0.1 * a, 0.5 * a, 0.9 * a,
                                 0.999 * a, a, 1.001 * a, 1.5 * a, 2.0 * a, 5.0 * a, 10.0 * a};
    std::vector<Vec2> dirs;
    if (k.dim == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        for (int i = 0; i < 8; ++i) {
            double th = 6.283185307179586476925286766559 * i / 8.0;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }

    const double rel = 1e-12;

    bool env_lo = true, env_hi = true;
    std::string w_lo, w_hi;
    for (double r : radii) {
        double e = k.envelope(r);
        double lo = r <= a ? 1.0 : 0.0;
        double hi = r <= a ? std::pow(r, -(k.dim + 2) + a) : 0.0;
        if (e < lo * (1.0 - rel)) {
            env_lo = false;
            w_lo = "env(" + format_double(r) + ")=" + format_double(e);
        }
        if (e > hi * (1.0 + rel)) {
            env_hi = false;
            w_hi = "env(" + format_double(r) + ")=" + format_double(e);
        }
    }
    add("envelope-above-core-indicator", env_lo, w_lo);
    add("envelope-below-singular-cap", env_hi, w_hi);

    bool even = true, lower = true, upper = true;
    std::string w_even, w_lower, w_upper;
    for (const auto& [t, x] : tx_samples) {
        for (Vec2 e : dirs) {
            for (double r : radii) {
                Vec2 nu = e * r;
                double v = k.K(t, x, nu);
                double vneg = k.K(t, x, -nu);
                if (std::fabs(v - vneg) > rel * std::max(1.0, std::fabs(v))) {
                    even = false;
                    w_even = "K(nu)=" + format_double(v) + " K(-nu)=" + format_double(vneg);
                }
                double env = k.envelope(r);
                if (v < a * env * (1.0 - rel) - 1e-300) {
                    lower = false;
                    w_lower = "r=" + format_double(r) + " K=" + format_double(v) +
                              " alpha*env=" + format_double(a * env);
                }
                double cap = (1.0 / a) * std::max(env, std::exp(-a * r));
                if (v > cap * (1.0 + rel)) {
                    upper = false;
                    w_upper = "r=" + format_double(r) + " K=" + format_double(v) +
                              " cap=" + format_double(cap);
                }
            }
        }
    }
    add("even-in-nu", even, w_even);
    add("lower-envelope-bound", lower, w_lower);
    add("upper-envelope-bound", upper, w_upper);
    return rep;
}

}  // namespace kpplab
