#ifndef CIRCDIFF_STOCHCORR_HPP
#define CIRCDIFF_STOCHCORR_HPP

#include <cstdint>
#include <vector>

#include "circdiff/diffusion.hpp"
#include "circdiff/optimize.hpp"

namespace circdiff::stochcorr {

/// Correlation values are kept inside [-1 + eps, 1 - eps] to regularize the
/// -log sqrt(1 - rho^2) Jacobian at |rho| = 1.
inline constexpr double kRhoClamp = 1e-6;

/// One geometric-Brownian-motion price leg.
struct GbmLeg {
    double mu = 0.0;     // drift, 1/time
    double sigma = 0.2;  // volatility, 1/sqrt(time)
    double s0 = 100.0;   // initial price

    void validate() const;
};

enum class CorrKind { circular_brownian, von_mises };

/// The latent angle process driving rho_t = cos(theta_t).
struct CorrProcessSpec {
    CorrKind kind = CorrKind::circular_brownian;
    CbmParams cbm{1.0};   // used when kind == circular_brownian
    VonMisesParams vmp;   // used when kind == von_mises

    void validate() const;
};

/// Latent correlation path sampled at the observation times.
struct RhoPath {
    Eigen::ArrayXd times;
    Eigen::ArrayXd rhos;  // each in [-1 + kRhoClamp, 1 - kRhoClamp]
};

struct StochCorrHyper {
    double lambda1 = 4.0;  // roughness penalty weight
    double lambda2 = 0.0;  // kappa penalty weight (forced to 0 for CBM)
};

struct FitDiagnostics {
    int outer_rounds = 0;
    std::vector<double> objective_trace;
    int optimizer_evals = 0;
    bool clamped_init = false;  // rolling-correlation initializer hit the clamp
    bool converged = true;
};

struct StochCorrFit {
    GbmLeg leg1, leg2;
    CorrProcessSpec corr;
    RhoPath rho_path;
    double penalized_loglik = 0.0;
    StochCorrHyper hyper;
    double dt = 0.0;
    FitDiagnostics diagnostics;
};

struct BootstrapBands {
    Eigen::ArrayXd times;
    Eigen::ArrayXd lower, upper;
    double level = 0.95;
    int n_samples = 0;
    int refit_failures = 0;
};

struct StochCorrSim {
    Eigen::ArrayXd prices1, prices2;
    AngularPath hidden_theta;  // returned for testing against the latent path
};

/// Simulates the pair: theta by Euler-Maruyama, prices by exact per-interval
/// GBM increments with rho_i = cos(theta_i) frozen over step i and (Z1, Z2)
/// independent. The theta driver and the price drivers use independent
/// streams derived from the seed.
StochCorrSim simulate_stochcorr(const GbmLeg& leg1, const GbmLeg& leg2,
                                const CorrProcessSpec& spec, double theta0, Eigen::Index n,
                                double dt, std::uint64_t seed);

/// r_i = log p_{i+1} - log p_i. Nonpositive prices are a data error.
Eigen::ArrayXd log_returns(const Eigen::ArrayXd& prices, double dt);

/// Bivariate-normal log-likelihood of the return pairs conditional on the
/// correlation path, with per-step mean ((mu - sigma^2/2) dt, ...) and
/// covariance [[s1^2, s1 s2 rho_i], [s1 s2 rho_i, s2^2]] dt. The constant
/// -log(2 pi) per observation is dropped.
double conditional_loglik(const GbmLeg& leg1, const GbmLeg& leg2, const RhoPath& rho,
                          const Eigen::ArrayXd& returns1, const Eigen::ArrayXd& returns2,
                          double dt);

/// conditional_loglik plus the transition terms of the latent angle path
/// acos(rho_i) under the chosen circular process and the change-of-variables
/// term -log sqrt(1 - rho_{i+1}^2).
double joint_loglik(const GbmLeg& leg1, const GbmLeg& leg2, const CorrProcessSpec& spec,
                    const RhoPath& rho, const Eigen::ArrayXd& returns1,
                    const Eigen::ArrayXd& returns2, double dt);

/// joint_loglik minus lambda1 (T/dt) sum (rho_{i+1} - rho_i)^2 minus
/// lambda2 kappa; the objective that is maximized. lambda2 is forced to 0
/// for the circular Brownian correlation process.
double penalized_loglik(const GbmLeg& leg1, const GbmLeg& leg2, const CorrProcessSpec& spec,
                        const RhoPath& rho, const Eigen::ArrayXd& returns1,
                        const Eigen::ArrayXd& returns2, double dt, double lambda1,
                        double lambda2);

struct StochCorrOptions {
    Eigen::Index knot_spacing = 1;  // rho enters the optimizer every k-th point
    int outer_rounds = 20;
    double outer_tol = 1e-6;
    int max_evals = 20000;  // optimizer budget per outer round
    double param_tol = 1e-6;
    double corr_sigma_floor = 1e-4;  // QV estimate of the latent sigma is floored here
    double lambda_max = 50.0;        // von Mises drift bound
    int rolling_window = 20;         // initializer window, in returns
    int workers = 0;                 // bootstrap refit parallelism (0: all cores)
};

/// Alternating penalized-likelihood fit: the correlation-process sigma is set
/// by the quadratic-variation estimator on acos(rho_hat) between rounds, and
/// (leg params, von Mises drift params, rho knots) are maximized with
/// dfo_maximize. Deterministic: the initializer is the rolling-window
/// correlation of log-returns and the optimizer has no random component.
StochCorrFit fit_stochcorr(const Eigen::ArrayXd& prices1, const Eigen::ArrayXd& prices2,
                           double dt, CorrKind kind, const StochCorrHyper& hyper,
                           const StochCorrOptions& opts = {});

/// Parametric bootstrap of Algorithm-style rho bands: simulate n_samples
/// price pairs from the fitted parameters with the fitted rho path frozen,
/// refit each, and band rho_hat by the per-time percentile of the circular
/// pivot U = 1 - cos(acos rho_hat - acos rho_hat_i), intersected with [-1, 1].
/// Errors if more than 20% of the refits fail.
BootstrapBands bootstrap_rho_bands(const StochCorrFit& fit, int n_samples, double level,
                                   std::uint64_t seed, const StochCorrOptions& opts = {});

}  // namespace circdiff::stochcorr

#endif  // CIRCDIFF_STOCHCORR_HPP
