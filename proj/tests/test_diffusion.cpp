#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "circdiff/angle.hpp"
#include "circdiff/diffusion.hpp"
#include "circdiff/densities.hpp"
#include "circdiff/errors.hpp"
#include "testutil.hpp"

using namespace circdiff;

namespace {

double qv_sigma(const AngularPath& p) {
    double ss = 0.0;
    for (Eigen::Index i = 0; i + 1 < p.size(); ++i) {
        const double d = angular_diff(p.angles[i + 1], p.angles[i]);
        ss += d * d;
    }
    return std::sqrt(ss / p.span());
}

}  // namespace

TEST_CASE("simulate_cbm degenerate diffusion stays put") {
    const auto path = simulate_cbm({1e-12}, 0.7, 100, 0.01, 1);
    for (Eigen::Index i = 0; i < path.size(); ++i) {
        CHECK(std::abs(path.angles[i] - 0.7) < 1e-6);
    }
}

TEST_CASE("simulators are deterministic and wrapped") {
    const auto a = simulate_cbm({1.0}, 0.0, 500, 0.05, 42);
    const auto b = simulate_cbm({1.0}, 0.0, 500, 0.05, 42);
    CHECK((a.angles == b.angles).all());
    CHECK((a.angles > -M_PI).all());
    CHECK((a.angles <= M_PI).all());

    const VonMisesParams vm{Angle(0.5), 2.0, 1.0};
    const auto c = simulate_vmp(vm, 0.0, 500, 0.05, 42);
    const auto d = simulate_vmp(vm, 0.0, 500, 0.05, 42);
    CHECK((c.angles == d.angles).all());
    CHECK((c.angles > -M_PI).all());
    CHECK((c.angles <= M_PI).all());

    const auto e = simulate_cbm({1.0}, 0.0, 500, 0.05, 43);
    CHECK(e.angles[499] != a.angles[499]);
}

TEST_CASE("simulate argument validation") {
    CHECK_THROWS_AS(simulate_cbm({1.0}, 0.0, 1, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_cbm({1.0}, 0.0, 10, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_cbm({-1.0}, 0.0, 10, 0.1, 0), std::invalid_argument);
}

TEST_CASE("simulate_cbm quadratic variation recovers sigma") {
    // desk-scale version of the Table-1 cell (sigma=1, n=10000, dt=0.005)
    const int reps = 30;
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < reps; ++k) {
        const auto p = simulate_cbm({1.0}, 0.0, 10000, 0.005, 100 + k);
        const double err = 1.0 - qv_sigma(p);
        sum += err;
        sumsq += err * err;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt(sumsq / reps - mean * mean);
    CHECK(std::abs(mean) < 0.01);
    CHECK(sd < 0.015);  // paper-scale SD is ~0.007
}

TEST_CASE("simulate_vmp fixed points of the drift") {
    const VonMisesParams vm{Angle(0.9), 2.0, 1e-12};
    const auto at_mean = simulate_vmp(vm, 0.9, 200, 0.01, 5);
    for (Eigen::Index i = 0; i < at_mean.size(); ++i) {
        CHECK(std::abs(at_mean.angles[i] - 0.9) < 1e-6);
    }
    const auto antipode = simulate_vmp(vm, wrap(0.9 + M_PI), 200, 0.01, 5);
    for (Eigen::Index i = 0; i < antipode.size(); ++i) {
        CHECK(std::abs(angular_diff(antipode.angles[i], wrap(0.9 + M_PI))) < 1e-6);
    }
}

TEST_CASE("simulate_vmp long-run law matches von Mises(mu, 2 lambda/sigma^2)") {
    const VonMisesParams vm{Angle(0.4), 2.0, 1.0};  // kappa = 4
    const auto path = simulate_vmp(vm, 0.4, 1000000, 0.01, 99);
    auto hist = testutil::histogram_density(path.angles, 128);
    auto ref = DensityGrid::uniform(128);
    ref.values = von_mises_pdf(ref.theta, 0.4, 4.0);
    CHECK(hellinger_discrete(hist, ref) < 0.05);
}

TEST_CASE("cbm_tpd delegates to the wrapped normal") {
    const CbmParams p{2.0};
    CHECK(cbm_tpd(0.3, -0.2, 0.5, p) == wrapped_normal_pdf(0.3, -0.2, 2.0 * std::sqrt(0.5)));
    CHECK_THROWS_AS(cbm_tpd(0.0, 0.0, 0.0, p), std::invalid_argument);
}

TEST_CASE("cbm_tpd long elapsed time is uniform") {
    const CbmParams p{2.0};
    for (double theta : {-3.0, 0.0, 2.0}) {
        CHECK(cbm_tpd(theta, 0.5, 25.0, p) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-6));
    }
}

TEST_CASE("cbm_tpd normalizes") {
    const auto grid = circle_grid(4096);
    Eigen::ArrayXd pdf(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        pdf[i] = cbm_tpd(grid[i], 0.5, 0.5, {2.0});
    }
    CHECK(testutil::circle_mass(pdf, 2.0 * M_PI / 4096) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("vmp_tpd integrates to one across regimes") {
    const auto grid = circle_grid(2048);
    const double dtheta = 2.0 * M_PI / 2048;
    for (double kappa : {0.5, 1.0, 2.0, 4.0}) {
        const VonMisesParams vm{Angle(0.6), kappa / 2.0, 1.0};  // sigma=1, lambda=kappa/2
        for (double t : {1e-3, 1e-2, 1e-1, 1.0}) {
            const Eigen::ArrayXd pdf = vmp_tpd(grid, -0.3, t, vm);
            CHECK(testutil::circle_mass(pdf, dtheta) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK((pdf >= 0.0).all());
        }
    }
}

TEST_CASE("vmp_tpd stationary limit is the von Mises law") {
    const VonMisesParams vm{Angle(0.8), 2.0, 1.0};  // kappa = 4
    const double gamma = 4.0 * 0.863522611024551;
    const double t = 50.0 / gamma;  // gamma sigma^2 t = 50
    const auto grid = circle_grid(1024);
    const Eigen::ArrayXd p = vmp_tpd(grid, -2.0, t, vm);
    const Eigen::ArrayXd f = von_mises_pdf(grid, 0.8, 4.0);
    CHECK((p - f).abs().maxCoeff() < 1e-6);
}

TEST_CASE("vmp_tpd stationary-ratio property of the unnormalized form") {
    // t -> infinity (q < 1e-12): unnormalized ratios equal von Mises ratios
    const VonMisesParams vm{Angle(0.8), 1.0, 1.0};  // kappa = 2
    const double gamma = 2.0 * 0.697774657964008;
    const double t = 80.0 / gamma;                  // q = e^-80 < 1e-12
    const double a = 0.4, b = -1.7;
    const double ratio_un = vmp_tpd_unnormalized(a, 0.0, t, vm) /
                            vmp_tpd_unnormalized(b, 0.0, t, vm);
    const double ratio_vm = von_mises_pdf(a, 0.8, 2.0) / von_mises_pdf(b, 0.8, 2.0);
    CHECK(ratio_un == doctest::Approx(ratio_vm).epsilon(1e-8));
}

TEST_CASE("vmp_tpd symmetry for mu = theta0 = 0") {
    const VonMisesParams vm{Angle(0.0), 2.0, 1.0};
    const auto grid = circle_grid(512);
    const Eigen::ArrayXd p = vmp_tpd(grid, 0.0, 0.05, vm);
    for (Eigen::Index i = 0; i < 256; ++i) {
        // theta_j and -theta_j are mirror cells: grid[i] = -grid[510 - i]... use lookup
        const double lhs = vmp_tpd(grid[i], 0.0, 0.05, vm);
        const double rhs = vmp_tpd(-grid[i], 0.0, 0.05, vm);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("vmp_tpd kappa -> 0 collapses to the circular Brownian TPD") {
    // short-time fallback at lambda = 1e-12 (gamma sigma^2 t < 1e-14)
    const VonMisesParams tiny{Angle(0.3), 1e-12, 1.0};
    const CbmParams cbm{1.0};
    for (double th : {-2.0, 0.0, 0.01, 1.5}) {
        CHECK(vmp_tpd(th, 0.0, 0.01, tiny) ==
              doctest::Approx(cbm_tpd(th, 0.0, 0.01, cbm)).epsilon(1e-3));
    }
    // mid-regime: formula path, effective variance (1-q)/(gamma sqrt(q)) ~ sigma^2 t
    const VonMisesParams small{Angle(0.3), 1e-3, 1.0};
    for (double th : {-2.0, 0.0, 0.01, 1.5}) {
        const double a = vmp_tpd(th, 0.0, 0.01, small);
        const double b = cbm_tpd(th, 0.0, 0.01, cbm);
        CHECK(a == doctest::Approx(b).epsilon(1e-3));
    }
}

TEST_CASE("vmp_tpd_unnormalized near-singular-time error") {
    const VonMisesParams vm{Angle(0.0), 1e-12, 1.0};
    CHECK_THROWS_AS(vmp_tpd_unnormalized(0.1, 0.0, 1e-3, vm), NearSingularTimeError);
}

TEST_CASE("vmp_tpd_norm_const quadrature") {
    const VonMisesParams vm{Angle(0.2), 2.0, 1.0};  // kappa = 4
    SUBCASE("grid doubling is converged") {
        const auto c1 = vmp_tpd_norm_const(0.5, 0.1, vm, 2048);
        const auto c2 = vmp_tpd_norm_const(0.5, 0.1, vm, 4096);
        CHECK(std::abs(c1.norm_const / c2.norm_const - 1.0) < 1e-8);
    }
    SUBCASE("constants satisfy their invariants") {
        const auto c = vmp_tpd_norm_const(0.5, 0.1, vm);
        CHECK(c.gamma > 0.0);
        CHECK(c.q > 0.0);
        CHECK(c.q < 1.0);
        CHECK(c.norm_const > 0.0);
    }
    SUBCASE("grid_points precondition") {
        CHECK_THROWS_AS(vmp_tpd_norm_const(0.0, 0.1, vm, 128), std::invalid_argument);
    }
}

TEST_CASE("trapezoid rule reproduces a normalized integrand") {
    // feeding an already-normalized density through the same quadrature
    const auto grid = circle_grid(2048);
    const Eigen::ArrayXd f = von_mises_pdf(grid, 0.4, 3.0);
    CHECK(testutil::circle_mass(f, 2.0 * M_PI / 2048) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("vmp_tpd_norm_const near stationarity factors the kernel mass") {
    // q -> 0: unnormalized density ~ (kernel mass constant) * vonMises.
    // With the wrapped-Gaussian mass scale/sqrt(2 pi) factored, C ~ 1.
    const VonMisesParams vm{Angle(0.0), 0.5, 1.0};  // kappa = 1
    const double gamma = 1.0 * 0.446390659563028;   // kappa I1/I0 at kappa=1
    const double t = 40.0 / gamma;
    const auto c = vmp_tpd_norm_const(1.0, t, vm);
    const double scale = std::sqrt((1.0 - c.q) / (c.gamma * std::sqrt(c.q)));
    CHECK(c.norm_const * scale / std::sqrt(2.0 * M_PI) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("short-time concentration: circular variance tracks sigma^2 t") {
    const VonMisesParams vm{Angle(0.2), 2.0, 1.0};  // kappa=4, gamma=3.454
    const double gamma = 4.0 * 0.863522611024551;
    const double t = 1e-4 / gamma;  // gamma sigma^2 t = 1e-4
    const auto grid = circle_grid(32768);
    const Eigen::ArrayXd p = vmp_tpd(grid, 0.9, t, vm);
    double var = 0.0;
    const double dtheta = 2.0 * M_PI / 32768;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double d = angular_diff(grid[i], 0.9);
        var += d * d * p[i] * dtheta;
    }
    CHECK(var == doctest::Approx(t).epsilon(0.10));
}

TEST_CASE("VmpTransitionCache matches the direct quadrature") {
    const VonMisesParams vm{Angle(0.7), 2.0, 1.0};
    const double dt = 0.005;
    const VmpTransitionCache cache(vm, dt);
    for (double th0 : {-3.0, -1.2, 0.0, 0.7, 2.5, 3.1}) {
        const auto c = vmp_tpd_norm_const(th0, dt, vm, 2048);
        CHECK(cache.log_norm_const(th0) == doctest::Approx(std::log(c.norm_const)).epsilon(1e-6));
        const double next = wrap(th0 + 0.13);
        CHECK(cache.log_tpd(next, th0) ==
              doctest::Approx(std::log(vmp_tpd(next, th0, dt, vm))).epsilon(1e-6));
    }
}

TEST_CASE("VmpTransitionCache narrow-kernel branch matches a resolved quadrature") {
    // sigma = 0.05 at daily dt: kernel scale ~ 3e-3, below the largest
    // automatic grid; the Laplace normalizer must agree with a direct
    // quadrature on a grid fine enough to resolve the kernel
    const VonMisesParams vm{Angle(0.4), 1.0, 0.05};
    const double dt = 1.0 / 252.0;
    const VmpTransitionCache cache(vm, dt);
    for (double th0 : {-2.0, 0.0, 0.4, 1.3, 3.0}) {
        const auto c = vmp_tpd_norm_const(th0, dt, vm, 16384);
        CHECK(cache.log_norm_const(th0) == doctest::Approx(std::log(c.norm_const)).epsilon(1e-4));
    }
}

TEST_CASE("VmpTransitionCache short-time fallback normalizes") {
    const VonMisesParams vm{Angle(0.0), 1e-12, 1.0};
    const VmpTransitionCache cache(vm, 0.01);
    CHECK(cache.log_tpd(0.2, 0.1) ==
          doctest::Approx(std::log(wrapped_normal_pdf(0.2, 0.1, 0.1))).epsilon(1e-12));
}
