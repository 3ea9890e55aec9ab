// Acceptance suite: runs every acceptance criterion end to end and prints one
// PASS/FAIL line per criterion. Exit code is the number of failed criteria.
// Run a single criterion with --criterion N.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "circdiff/angle.hpp"
#include "circdiff/bessel.hpp"
#include "circdiff/densities.hpp"
#include "circdiff/diffusion.hpp"
#include "circdiff/estimation.hpp"
#include "circdiff/parallel.hpp"
#include "circdiff/pde.hpp"
#include "circdiff/stochcorr.hpp"

using namespace circdiff;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    std::ostringstream msg;
    bool pass = true;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            msg << (msg.tellp() > 0 ? "; " : "") << what;
        }
    }
    Outcome done(const std::string& detail) {
        return {pass, pass ? detail : msg.str() + " |" + detail};
    }
};

// kappa-primary reading of the Figure-1 parameter grid: sigma from the
// caption row, lambda = kappa sigma^2 / 2
std::vector<VonMisesParams> kappa_primary_params(double mu) {
    const std::vector<std::pair<double, double>> kappa_sigma = {
        {0.5, 2.0}, {1.0, 1.0}, {2.0, 2.0}, {4.0, 2.0}};
    std::vector<VonMisesParams> out;
    for (const auto& [kappa, sigma] : kappa_sigma) {
        out.push_back({Angle(mu), kappa * sigma * sigma / 2.0, sigma});
    }
    return out;
}

const std::vector<double> kFigureMus = {M_PI / 4, -M_PI / 4, M_PI / 3,
                                        -M_PI / 3, M_PI / 2, -M_PI / 2};
const std::vector<double> kFigureTimes = {1e-4, 1e-3, 1e-2, 1e-1};

Outcome criterion1() {
    Check c;
    struct Cell {
        VonMisesParams params;
        std::vector<pde::TpdValidationRow> rows;
    };
    std::vector<Cell> cells;
    for (double mu : kFigureMus) {
        for (const auto& p : kappa_primary_params(mu)) cells.push_back({p, {}});
    }
    parallel_for(static_cast<int>(cells.size()), 0, [&](int i) {
        cells[i].rows = pde::validate_tpd({cells[i].params}, 0.0, kFigureTimes, 3000, 20000);
    });
    double max_h = 0.0;
    int bad = 0, total = 0;
    std::ostringstream worst;
    for (const auto& cell : cells) {
        for (const auto& r : cell.rows) {
            ++total;
            max_h = std::max(max_h, r.hellinger);
            if (!(r.hellinger < 0.02)) {
                ++bad;
                worst << " [kappa=" << r.kappa << " mu=" << r.mu << " t=" << r.t
                      << " H=" << r.hellinger << "]";
            }
        }
    }
    c.require(bad == 0, std::to_string(bad) + "/" + std::to_string(total) +
                            " cells at Hellinger >= 0.02:" + worst.str());
    return c.done("max Hellinger = " + std::to_string(max_h) + " over " +
                  std::to_string(total) + " cells");
}

Outcome criterion2() {
    Check c;
    double worst_mass = 0.0, worst_h = 0.0;
    for (const auto& p : kappa_primary_params(0.7)) {
        const double gamma = p.kappa() * bessel_ratio(p.kappa());
        const double t = 50.0 / (gamma * p.sigma * p.sigma);
        auto grid = DensityGrid::uniform(2048);
        grid.values = vmp_tpd(grid.theta, -1.3, t, p);
        worst_mass = std::max(worst_mass, std::abs(grid.mass() - 1.0));
        auto ref = DensityGrid::uniform(2048);
        ref.values = von_mises_pdf(ref.theta, 0.7, p.kappa());
        worst_h = std::max(worst_h, hellinger_discrete(grid, ref));
    }
    std::ostringstream detail;
    detail << "max |mass-1| = " << worst_mass << ", max stationary Hellinger = " << worst_h;
    c.require(worst_mass <= 1e-6, "mass defect > 1e-6: " + detail.str());
    c.require(worst_h < 1e-3, "stationary Hellinger >= 1e-3: " + detail.str());
    return c.done(detail.str());
}

Outcome criterion3() {
    Check c;
    std::ostringstream detail;
    const std::vector<std::pair<Eigen::Index, double>> cells = {
        {1000, 0.005}, {1000, 0.05}, {10000, 0.005}, {10000, 0.05}};
    const std::vector<double> paper_sd = {0.021, 0.023, 0.007, 0.006};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        estimation::StudyConfig cfg;
        cfg.process = estimation::ProcessKind::circular_brownian;
        cfg.sigma = 1.0;
        cfg.n = cells[i].first;
        cfg.dt = cells[i].second;
        cfg.replications = 100;
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        const auto r = replicate_study(cfg);
        detail << " (n=" << cfg.n << ",dt=" << cfg.dt << "): bias=" << r.sigma_bias
               << " sd=" << r.sigma_sd;
        c.require(std::abs(r.sigma_bias) <= 0.01,
                  "bias " + std::to_string(r.sigma_bias) + " at n=" + std::to_string(cfg.n) +
                      ", dt=" + std::to_string(cfg.dt));
        c.require(r.sigma_sd <= 2.0 * paper_sd[i],
                  "sd " + std::to_string(r.sigma_sd) + " > 2x paper at n=" +
                      std::to_string(cfg.n) + ", dt=" + std::to_string(cfg.dt));
    }
    estimation::StudyConfig coarse;
    coarse.process = estimation::ProcessKind::circular_brownian;
    coarse.sigma = 2.0;
    coarse.n = 10000;
    coarse.dt = 0.5;
    coarse.replications = 100;
    coarse.seed = 77;
    const auto r = replicate_study(coarse);
    detail << " coarse(sigma=2,dt=0.5): bias=" << r.sigma_bias;
    c.require(r.sigma_bias >= 0.05 && r.sigma_bias <= 0.12,
              "coarse-sampling bias " + std::to_string(r.sigma_bias) + " outside [0.05, 0.12]");
    return c.done(detail.str());
}

Outcome criterion4() {
    Check c;
    std::ostringstream detail;
    estimation::StudyConfig cfg;
    cfg.process = estimation::ProcessKind::von_mises;
    cfg.mu = M_PI / 2;
    cfg.lambda = 2.0;
    cfg.sigma = 1.0;
    cfg.n = 10000;
    cfg.replications = 50;

    cfg.dt = 0.005;
    cfg.seed = 4100;
    const auto a = estimation::replicate_study(cfg);
    detail << " dt=0.005: E[lam-lamhat]=" << *a.lambda_bias
           << " conc=" << *a.mu_concentration;
    c.require(*a.mu_concentration >= 0.95,
              "mu concentration " + std::to_string(*a.mu_concentration) + " < 0.95");
    c.require(*a.lambda_bias >= -1.5 && *a.lambda_bias <= -0.4,
              "E[lambda-lambda_hat] = " + std::to_string(*a.lambda_bias) +
                  " outside [-1.5, -0.4] at dt=0.005");

    cfg.dt = 0.05;
    cfg.seed = 4200;
    const auto b = estimation::replicate_study(cfg);
    detail << "; dt=0.05: E[lam-lamhat]=" << *b.lambda_bias
           << " E[sig-sighat]=" << b.sigma_bias;
    c.require(*b.lambda_bias >= -0.25 && *b.lambda_bias <= 0.05,
              "E[lambda-lambda_hat] = " + std::to_string(*b.lambda_bias) +
                  " outside [-0.25, 0.05] at dt=0.05");
    c.require(std::abs(b.sigma_bias) <= 0.05,
              "|E[sigma-sigma_hat]| = " + std::to_string(std::abs(b.sigma_bias)) + " > 0.05");
    return c.done(detail.str());
}

double cn_max_error_vs_wn(Eigen::Index k, Eigen::Index m) {
    const VonMisesParams nearly_cbm{Angle(0.3), 1e-14, 1.0};
    const auto sol = pde::crank_nicolson_vmp(nearly_cbm, 0.0, 0.1, k, m);
    const auto& g = sol.densities.back();
    return (g.values - wrapped_normal_pdf(g.theta, 0.0, std::sqrt(0.1))).abs().maxCoeff();
}

Outcome criterion5() {
    Check c;
    const double err_fine = cn_max_error_vs_wn(3000, 20000);
    const double err_coarse = cn_max_error_vs_wn(1500, 10000);
    c.require(err_fine < 1e-3,
              "degenerate-case error " + std::to_string(err_fine) + " >= 1e-3");
    c.require(err_coarse / err_fine >= 3.0,
              "error ratio " + std::to_string(err_coarse / err_fine) + " < 3 on refinement");

    const VonMisesParams vm{Angle(0.5), 2.0, 1.0};  // kappa = 4
    const auto sol = pde::crank_nicolson_vmp(vm, 0.0, 1.0, 3000, 20000, {0.5, 1.0});
    c.require(sol.max_mass_defect <= 1e-6,
              "mass defect " + std::to_string(sol.max_mass_defect) + " > 1e-6");
    std::ostringstream detail;
    detail << "err(3000,20000)=" << err_fine << ", refinement ratio="
           << err_coarse / err_fine << ", mass defect=" << sol.max_mass_defect;
    return c.done(detail.str());
}

stochcorr::StochCorrSim frozen_rho_pair(double rho, Eigen::Index n, std::uint64_t seed) {
    stochcorr::CorrProcessSpec spec;
    spec.kind = stochcorr::CorrKind::circular_brownian;
    spec.cbm.sigma = 1e-12;
    return simulate_stochcorr({0.05, 0.2, 100.0}, {0.08, 0.3, 50.0}, spec, std::acos(rho), n,
                              1.0 / 252.0, seed);
}

stochcorr::StochCorrOptions acceptance_sc_options() {
    stochcorr::StochCorrOptions opts;
    opts.knot_spacing = 10;
    opts.max_evals = 12000;
    opts.outer_rounds = 6;
    return opts;
}

Outcome criterion6() {
    Check c;
    std::ostringstream detail;
    const auto opts = acceptance_sc_options();
    int i = 0;
    for (double rho : {0.0, 0.5, -0.7}) {
        const auto sim = frozen_rho_pair(rho, 500, 600 + static_cast<std::uint64_t>(i++));
        const auto fit = stochcorr::fit_stochcorr(sim.prices1, sim.prices2, 1.0 / 252.0,
                                                  stochcorr::CorrKind::circular_brownian,
                                                  {4.0, 0.0}, opts);
        const double mae = (fit.rho_path.rhos - rho).abs().mean();
        detail << " rho=" << rho << ": MAE=" << mae << " s1=" << fit.leg1.sigma
               << " s2=" << fit.leg2.sigma;
        c.require(mae <= 0.2, "MAE " + std::to_string(mae) + " > 0.2 at rho=" +
                                  std::to_string(rho));
        c.require(std::abs(fit.leg1.sigma - 0.2) <= 0.25 * 0.2,
                  "sigma1 " + std::to_string(fit.leg1.sigma) + " outside 0.2 +- 25%");
        c.require(std::abs(fit.leg2.sigma - 0.3) <= 0.25 * 0.3,
                  "sigma2 " + std::to_string(fit.leg2.sigma) + " outside 0.3 +- 25%");
    }
    return c.done(detail.str());
}

Outcome criterion7() {
    Check c;
    // time-varying latent correlation so the fitted roughness is not
    // degenerate at zero for every penalty weight
    stochcorr::CorrProcessSpec spec;
    spec.kind = stochcorr::CorrKind::circular_brownian;
    spec.cbm.sigma = 3.0;
    const auto sim = simulate_stochcorr({0.05, 0.2, 100.0}, {0.08, 0.3, 50.0}, spec,
                                        std::acos(0.3), 500, 1.0 / 252.0, 700);
    const auto opts = acceptance_sc_options();
    std::ostringstream detail;
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda1 : {1.0, 4.0, 10.0}) {
        const auto fit = stochcorr::fit_stochcorr(sim.prices1, sim.prices2, 1.0 / 252.0,
                                                  stochcorr::CorrKind::circular_brownian,
                                                  {lambda1, 0.0}, opts);
        const auto& r = fit.rho_path.rhos;
        const double rough = (r.tail(r.size() - 1) - r.head(r.size() - 1)).square().sum();
        detail << " lambda1=" << lambda1 << ": roughness=" << rough;
        c.require(rough <= prev + 1e-12,
                  "roughness increased at lambda1=" + std::to_string(lambda1));
        prev = rough;
    }
    return c.done(detail.str());
}

Outcome criterion8() {
    Check c;
    const auto opts = acceptance_sc_options();
    const auto sim = frozen_rho_pair(0.5, 500, 800);
    const auto fit = stochcorr::fit_stochcorr(sim.prices1, sim.prices2, 1.0 / 252.0,
                                              stochcorr::CorrKind::circular_brownian,
                                              {4.0, 0.0}, opts);
    const auto narrow = stochcorr::bootstrap_rho_bands(fit, 50, 0.5, 808, opts);
    const auto wide = stochcorr::bootstrap_rho_bands(fit, 50, 0.95, 808, opts);
    const auto again = stochcorr::bootstrap_rho_bands(fit, 50, 0.95, 808, opts);
    bool contain = true, monotone = true;
    for (Eigen::Index t = 0; t < fit.rho_path.rhos.size(); ++t) {
        contain = contain && narrow.lower[t] <= fit.rho_path.rhos[t] &&
                  narrow.upper[t] >= fit.rho_path.rhos[t] &&
                  wide.lower[t] <= fit.rho_path.rhos[t] &&
                  wide.upper[t] >= fit.rho_path.rhos[t];
        monotone = monotone && (wide.upper[t] - wide.lower[t]) >=
                                   (narrow.upper[t] - narrow.lower[t]) - 1e-12;
    }
    c.require(contain, "bands do not contain the point estimate everywhere");
    c.require(monotone, "band widths not monotone in the level");
    c.require((again.lower == wide.lower).all() && (again.upper == wide.upper).all(),
              "bootstrap not reproducible under a fixed master seed");
    c.require(wide.refit_failures == 0,
              std::to_string(wide.refit_failures) + " refit failures");
    std::ostringstream detail;
    detail << "N=50, mean width(q=0.5)=" << (narrow.upper - narrow.lower).mean()
           << ", mean width(q=0.95)=" << (wide.upper - wide.lower).mean()
           << ", refit failures=" << wide.refit_failures;
    return c.done(detail.str());
}

Outcome criterion9() {
    Check c;
    // rho = 0 factorization of the conditional likelihood
    const auto sim = frozen_rho_pair(0.3, 400, 900);
    const double dt = 1.0 / 252.0;
    const auto r1 = stochcorr::log_returns(sim.prices1, dt);
    const auto r2 = stochcorr::log_returns(sim.prices2, dt);
    stochcorr::RhoPath rho;
    rho.times = dt * Eigen::ArrayXd::LinSpaced(400, 0.0, 399.0);
    rho.rhos = Eigen::ArrayXd::Zero(400);
    const stochcorr::GbmLeg a{0.05, 0.2, 100.0}, b{0.08, 0.3, 50.0};
    const double joint = stochcorr::conditional_loglik(a, b, rho, r1, r2, dt);
    const auto uni = [&](const stochcorr::GbmLeg& leg, const Eigen::ArrayXd& r) {
        const double m = (leg.mu - leg.sigma * leg.sigma / 2.0) * dt;
        const double v = leg.sigma * leg.sigma * dt;
        return (-0.5 * ((r - m).square() / v + std::log(v))).sum();
    };
    const double split = uni(a, r1) + uni(b, r2);
    c.require(std::abs(joint - split) <= 1e-10 * std::abs(split),
              "factorization gap " + std::to_string(std::abs(joint - split)));

    // rotation invariance of the von Mises likelihood
    const VonMisesParams truth{Angle(0.5), 2.0, 1.0};
    const auto path = simulate_vmp(truth, 0.2, 300, 0.05, 901);
    const double base = estimation::vmp_loglik(1.5, 0.5, path, 1.0);
    double worst = 0.0;
    for (double delta : {0.9, -1.7, 2.8}) {
        AngularPath rotated = path;
        for (Eigen::Index i = 0; i < path.size(); ++i) {
            rotated.angles[i] = wrap(path.angles[i] + delta);
        }
        const double ll = estimation::vmp_loglik(1.5, wrap(0.5 + delta), rotated, 1.0);
        worst = std::max(worst, std::abs(ll - base) / std::abs(base));
    }
    c.require(worst <= 1e-10, "rotation invariance gap " + std::to_string(worst));
    std::ostringstream detail;
    detail << "factorization gap=" << std::abs(joint - split)
           << ", max rotation gap=" << worst;
    return c.done(detail.str());
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc + 1; ++i) {
        if (i < argc && std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[i + 1]);
        }
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"TPD-vs-PDE validation (Figure 1 grid, kappa-primary)", criterion1},
        {"normalization and stationarity of the analytic TPD", criterion2},
        {"Table-1 reproduction (QV estimator, desk scale)", criterion3},
        {"Table-2/3 pattern reproduction (50 replications)", criterion4},
        {"Crank-Nicolson correctness and convergence", criterion5},
        {"stochastic-correlation recovery on frozen rho", criterion6},
        {"penalty monotonicity of the fitted-path roughness", criterion7},
        {"bootstrap band contract (N=50)", criterion8},
        {"likelihood identities", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (only != 0 && number != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s — %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL",
                    number, criteria[i].first.c_str(), outcome.detail.c_str(), secs);
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures;
}
