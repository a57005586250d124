#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kpplab/medium.hpp"

using namespace kpplab;
using namespace kpplab::testing;

TEST_CASE("homogeneous medium evaluates to its constants") {
    MediumRealization m = homogeneous_2d();
    for (auto [t, x] : tx_cloud(2, 32)) {
        CoeffSample c = m.eval(t, x);
        CHECK(c.A.a11 == 1.0);
        CHECK(c.A.a12 == 0.0);
        CHECK(c.A.a22 == 1.0);
        CHECK(c.b.x == 0.0);
        CHECK(c.fu0 == 1.0);
    }
}

TEST_CASE("coefficients are exactly 1-periodic in time") {
    // dyadic times keep t + 1 exactly representable, so periodicity is exact
    MediumParams fp;
    fp.kind = GeneratorKind::fourier;
    fp.dim = 2;
    fp.time_amp_diffusion = 0.4;
    fp.time_amp_fu0 = 0.2;
    for (MediumRealization m :
         {checkerboard_2d(), checkerboard_1d(), sample_medium(fp, 5)}) {
        for (auto [t0, x] : tx_cloud(m.dim, 16)) {
            (void)t0;
            for (int k = 0; k < 64; k += 7) {
                double t = k / 64.0;
                CoeffSample a = m.eval(t, x);
                CoeffSample b = m.eval(t + 1.0, x);
                CHECK(a.A.a11 == b.A.a11);
                CHECK(a.A.a22 == b.A.a22);
                CHECK(a.b.x == b.b.x);
                CHECK(a.fu0 == b.fu0);
            }
        }
    }
}

TEST_CASE("time modulation pins integers and stays in band") {
    CHECK(time_modulation(0.7, 0.0) == 1.0);
    CHECK(time_modulation(0.7, 3.0) == 1.0);
    for (int i = 0; i < 50; ++i) {
        double t = 0.02 * i;
        double v = time_modulation(0.7, t);
        CHECK(v <= 1.0);
        CHECK(v >= 0.3 - 1e-15);
    }
}

TEST_CASE("shift acts as a group and realizes stationarity") {
    MediumRealization m = checkerboard_2d(7);
    Vec2 y{1.7, -0.4}, z{-2.3, 0.9};

    MediumRealization m0 = shift_medium(m, {0.0, 0.0});
    MediumRealization my = shift_medium(m, y);
    MediumRealization myz = shift_medium(my, z);
    MediumRealization msum = shift_medium(m, y + z);

    for (auto [t, x] : tx_cloud(2, 64)) {
        CHECK(m0.eval(t, x).fu0 == m.eval(t, x).fu0);
        // shifted medium at x equals the original at x + y
        CHECK(my.eval(t, x).fu0 == m.eval(t, x + y).fu0);
        CHECK(my.eval(t, x).A.a11 == m.eval(t, x + y).A.a11);
        CHECK(myz.eval(t, x).fu0 == msum.eval(t, x).fu0);
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    MediumRealization a = checkerboard_2d(42);
    MediumRealization b = checkerboard_2d(42);
    MediumRealization c = checkerboard_2d(43);
    bool any_diff = false;
    for (auto [t, x] : tx_cloud(2, 200)) {
        CHECK(a.eval(t, x).fu0 == b.eval(t, x).fu0);
        CHECK(a.eval(t, x).A.a11 == b.eval(t, x).A.a11);
        if (a.eval(t, x).fu0 != c.eval(t, x).fu0) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("checkerboard cell mean approaches the law mean on large boxes") {
    MediumRealization m = checkerboard_2d(3);
    double law_mean = m.params.fu0_law.mean();
    auto box_mean = [&](double side) {
        double sum = 0.0;
        int n = 0;
        for (double x = -side / 2; x < side / 2; x += 0.5) {
            for (double y = -side / 2; y < side / 2; y += 0.5) {
                sum += m.fu0_space({x + 0.25, y + 0.25});
                ++n;
            }
        }
        return sum / n;
    };
    double small = std::fabs(box_mean(4.0) - law_mean);
    double large = std::fabs(box_mean(64.0) - law_mean);
    CHECK(large < 0.05);
    CHECK(large <= small + 0.01);
}

TEST_CASE("coefficient bounds hold at samples") {
    for (MediumRealization m : {checkerboard_2d(13), checkerboard_1d(13)}) {
        CHECK(validate_ellipticity(m));
        for (auto [t, x] : tx_cloud(m.dim, 500)) {
            CoeffSample s = m.eval(t, x);
            CHECK(s.A.min_eigenvalue(m.dim) >= m.lambda - 1e-12);
            CHECK(s.fu0 >= m.inf_fu0 - 1e-12);
            CHECK(s.fu0 <= m.sup_fu0 + 1e-12);
            CHECK(std::fabs(s.b.x) <= m.sup_b1 + 1e-12);
        }
    }
}

TEST_CASE("kpp validator accepts logistic and min_cut, rejects quadratic") {
    MediumRealization m = homogeneous_1d();
    auto tx = tx_cloud(1, 32);
    auto u = u_cloud();

    CHECK(validate_kpp(reaction_of(m), u, tx).all_pass());

    MediumParams p = m.params;
    p.profile = ReactionProfile::min_cut;
    MediumRealization mc = sample_medium(p, 1);
    CHECK(validate_kpp(reaction_of(mc), u, tx).all_pass());

    p.profile = ReactionProfile::quadratic_degenerate;
    MediumRealization mq = sample_medium(p, 1);
    ValidationReport bad = validate_kpp(reaction_of(mq), u, tx);
    CHECK_FALSE(bad.all_pass());
    bool slope_failed = false;
    for (const auto& c : bad.conditions) {
        if (!c.pass && (c.name == "positive-linearization-slope" ||
                        c.name == "uniform-linearization-limit")) {
            slope_failed = true;
        }
    }
    CHECK(slope_failed);
}

TEST_CASE("drift bound arithmetic") {
    CHECK(validate_drift_bound(homogeneous_1d(1.0, 1.0, 1.9)).pass);   // 3.61 < 4
    CHECK_FALSE(validate_drift_bound(homogeneous_1d(1.0, 1.0, 2.0)).pass);  // 4 is not < 4
    CHECK(validate_drift_bound(checkerboard_2d()).pass);  // b == 0
}

TEST_CASE("surrogate replaces the profile by min(u, 1-u)") {
    MediumRealization m = checkerboard_2d(21);
    MediumRealization s = kpp_surrogate(m);
    CHECK(s.profile() == ReactionProfile::min_cut);
    for (auto [t, x] : tx_cloud(2, 32)) {
        // dyadic u keeps 1 - u exact, so the profile symmetry is exact
        for (double u : {0.0, 0.125, 0.25, 0.375, 0.5, 0.75, 1.0}) {
            double fp = s.reaction(t, x, u);
            CHECK(fp <= s.fu0_at(t, x) * u + 1e-15);
            CHECK(fp == s.reaction(t, x, 1.0 - u));  // symmetric profile
        }
        CHECK(s.reaction(t, x, 0.0) == 0.0);
        CHECK(s.reaction(t, x, 1.0) == 0.0);
        CHECK(s.fu0_at(t, x) == m.fu0_at(t, x));
    }
}

TEST_CASE("profile values at the endpoints and domain error") {
    CHECK(profile_value(ReactionProfile::logistic, 0.0) == 0.0);
    CHECK(profile_value(ReactionProfile::logistic, 1.0) == 0.0);
    CHECK(profile_value(ReactionProfile::logistic, 0.5) == 0.25);
    CHECK(profile_value(ReactionProfile::min_cut, 0.3) == doctest::Approx(0.3));
    CHECK_THROWS(profile_value(ReactionProfile::logistic, 1.5));
}

TEST_CASE("kernel validator on the three reference kernels") {
    auto tx = tx_cloud(1, 8);
    CHECK(validate_kernel(core_kernel(1, 1.0), tx).all_pass());
    CHECK(validate_kernel(tail_kernel(1, 1.0), tx).all_pass());
    CHECK_FALSE(validate_kernel(oversingular_kernel(1, 1.0), tx).all_pass());
    // the same shapes with fractional order
    CHECK(validate_kernel(core_kernel(2, 0.5), tx_cloud(2, 8)).all_pass());
    CHECK_FALSE(validate_kernel(oversingular_kernel(2, 0.5), tx_cloud(2, 8)).all_pass());
}

TEST_CASE("generated checkerboard kernel passes its own validator") {
    KernelParams kp;
    kp.dim = 1;
    kp.alpha = 0.8;
    kp.contrast = 0.5;
    kp.time_amp = 0.05;  // keeps (1 - amp) * alpha^c above alpha
    KernelSpec k = make_checkerboard_kernel(kp, 17);
    CHECK(validate_kernel(k, tx_cloud(1, 16)).all_pass());
    kp.tail = true;
    kp.dim = 2;
    KernelSpec k2 = make_checkerboard_kernel(kp, 17);
    CHECK(validate_kernel(k2, tx_cloud(2, 16)).all_pass());
    // a time modulation deeper than the amplitude floor is refused outright
    kp.time_amp = 0.3;
    CHECK_THROWS_AS(make_checkerboard_kernel(kp, 17), std::invalid_argument);
    // evenness is exact by construction
    kp.time_amp = 0.05;
    for (auto [t, x] : tx_cloud(2, 16)) {
        CHECK(k2.K(t, x, {0.4, 0.2}) == k2.K(t, x, {-0.4, -0.2}));
    }
}
