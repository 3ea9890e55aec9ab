#include "circdiff/estimation.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "circdiff/angle.hpp"
#include "circdiff/densities.hpp"
#include "circdiff/errors.hpp"
#include "circdiff/optimize.hpp"
#include "circdiff/parallel.hpp"

namespace circdiff::estimation {

double qv_sigma_hat(const AngularPath& path) {
    path.validate();
    const double span = path.span();
    if (!(span > 0.0)) {
        throw std::invalid_argument("qv_sigma_hat: degenerate time span");
    }
    double ss = 0.0;
    for (Eigen::Index i = 0; i + 1 < path.size(); ++i) {
        const double d = angular_diff(path.angles[i + 1], path.angles[i]);
        ss += d * d;
    }
    return std::sqrt(ss / span);
}

double vmp_loglik(double lambda, double mu, const AngularPath& path, double sigma_hat) {
    path.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("vmp_loglik: lambda must be > 0");
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("vmp_loglik: sigma_hat must be > 0");
    const VonMisesParams params{Angle(mu), lambda, sigma_hat};
    // one normalizer cache per distinct observation interval
    std::map<double, VmpTransitionCache> caches;
    double total = 0.0;
    for (Eigen::Index i = 0; i + 1 < path.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        auto it = caches.find(dt);
        if (it == caches.end()) {
            it = caches.try_emplace(dt, params, dt).first;
        }
        total += it->second.log_tpd(path.angles[i + 1], path.angles[i]);
    }
    return total;
}

CircularFit fit_cbm(const AngularPath& path) {
    const double sigma_hat = qv_sigma_hat(path);
    if (sigma_hat == 0.0) {
        throw DataError("fit_cbm: degenerate path with zero quadratic variation");
    }
    double loglik = 0.0;
    for (Eigen::Index i = 0; i + 1 < path.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        const double d = angular_diff(path.angles[i + 1], path.angles[i]);
        loglik += std::log(wrapped_normal_pdf(d, 0.0, sigma_hat * std::sqrt(dt)));
    }
    return {sigma_hat, std::nullopt, std::nullopt, loglik, path.size(), true};
}

CircularFit fit_vmp(const AngularPath& path, const FitOptions& opts) {
    path.validate();
    if (path.size() < 3) throw std::invalid_argument("fit_vmp: need at least 3 observations");
    const double sigma_hat = qv_sigma_hat(path);
    if (sigma_hat == 0.0) {
        throw DataError("fit_vmp: degenerate path with zero quadratic variation");
    }
    const double mu0 = circular_mean(path.angles);

    // optimize (lambda, delta) with mu = wrap(mu0 + delta)
    const auto objective = [&](const Eigen::VectorXd& x) {
        return vmp_loglik(x[0], wrap(mu0 + x[1]), path, sigma_hat);
    };
    Eigen::VectorXd x0(2), lo(2), hi(2);
    x0 << 1.0, 0.0;
    lo << opts.lambda_min, -M_PI;
    hi << opts.lambda_max, M_PI;
    stochcorr::DfoOptions dfo;
    dfo.param_tol = opts.param_tol;
    dfo.max_evals = opts.max_evals;
    const auto r = stochcorr::dfo_maximize(objective, x0, lo, hi, dfo);

    CircularFit fit{sigma_hat, r.x[0], wrap(mu0 + r.x[1]), r.value, path.size(), r.converged};
    if (!std::isfinite(r.value)) {
        throw NumericalError("fit_vmp: non-finite likelihood at the returned iterate");
    }
    return fit;
}

ReplicationReport replicate_study(const StudyConfig& config) {
    if (config.replications < 2) {
        throw std::invalid_argument("replicate_study: need at least 2 replications");
    }
    if (!(config.sigma > 0.0)) {
        throw std::invalid_argument("replicate_study: zero-noise config rejected");
    }
    const int reps = config.replications;
    std::vector<double> sigma_err(reps), lambda_err(reps);
    Eigen::ArrayXd mu_hat(reps);
    std::vector<char> ok(reps, 0);

    parallel_for(reps, config.workers, [&](int k) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(k);
        try {
            if (config.process == ProcessKind::circular_brownian) {
                const auto path = simulate_cbm({config.sigma}, config.theta0, config.n,
                                               config.dt, seed);
                const auto fit = fit_cbm(path);
                sigma_err[k] = config.sigma - fit.sigma_hat;
            } else {
                const VonMisesParams params{Angle(config.mu), config.lambda, config.sigma};
                const auto path = simulate_vmp(params, config.theta0, config.n, config.dt, seed);
                const auto fit = fit_vmp(path, config.fit);
                sigma_err[k] = config.sigma - fit.sigma_hat;
                lambda_err[k] = config.lambda - *fit.lambda_hat;
                mu_hat[k] = *fit.mu_hat;
            }
            ok[k] = 1;
        } catch (const NumericalError&) {
            ok[k] = 0;
        } catch (const DataError&) {
            ok[k] = 0;
        }
    });

    ReplicationReport report;
    report.replications = reps;
    std::vector<double> se, le;
    std::vector<double> mus;
    for (int k = 0; k < reps; ++k) {
        if (!ok[k]) {
            ++report.failures;
            continue;
        }
        se.push_back(sigma_err[k]);
        if (config.process == ProcessKind::von_mises) {
            le.push_back(lambda_err[k]);
            mus.push_back(mu_hat[k]);
        }
    }
    if (se.size() < 2) {
        throw NumericalError("replicate_study: fewer than 2 successful replications");
    }
    const auto mean_sd = [](const std::vector<double>& v) {
        const double n = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair<double, double>{mean, std::sqrt(ss / (n - 1.0))};
    };
    std::tie(report.sigma_bias, report.sigma_sd) = mean_sd(se);
    if (config.process == ProcessKind::von_mises) {
        double lb, lsd;
        std::tie(lb, lsd) = mean_sd(le);
        report.lambda_bias = lb;
        report.lambda_sd = lsd;
        Eigen::ArrayXd mu_arr = Eigen::Map<Eigen::ArrayXd>(mus.data(), mus.size());
        const auto bc = bias_and_concentration(config.mu, mu_arr);
        report.mu_bias = bc.bias;
        report.mu_concentration = bc.concentration;
    }
    return report;
}

}  // namespace circdiff::estimation
