#ifndef CIRCDIFF_DIFFUSION_HPP
#define CIRCDIFF_DIFFUSION_HPP

#include <cstdint>

#include <Eigen/Core>

#include "circdiff/angle.hpp"

namespace circdiff {

/// Circular Brownian motion d theta = sigma dB, wrapped onto (-pi, pi].
struct CbmParams {
    double sigma = 1.0;  // radians / sqrt(time)

    void validate() const;
};

/// von Mises process d theta = -lambda sin(theta - mu) dt + sigma dB.
/// Stationary law: von Mises(mu, kappa = 2 lambda / sigma^2).
struct VonMisesParams {
    Angle mu;
    double lambda = 1.0;  // mean-reversion rate, 1/time
    double sigma = 1.0;   // radians / sqrt(time)

    double kappa() const { return 2.0 * lambda / (sigma * sigma); }
    void validate() const;
};

/// Discretely observed angle series; angles canonical in (-pi, pi],
/// times strictly increasing.
struct AngularPath {
    Eigen::ArrayXd times;
    Eigen::ArrayXd angles;

    Eigen::Index size() const { return times.size(); }
    double span() const { return times[times.size() - 1] - times[0]; }
    void validate() const;
};

/// Euler-Maruyama simulation of the circular Brownian motion:
/// theta_{i+1} = wrap(theta_i + sigma sqrt(dt) Z_i). Deterministic per seed.
AngularPath simulate_cbm(const CbmParams& params, double theta0, Eigen::Index n, double dt,
                         std::uint64_t seed);

/// Euler-Maruyama simulation of the von Mises process:
/// theta_{i+1} = wrap(theta_i - lambda sin(theta_i - mu) dt + sigma sqrt(dt) Z_i).
AngularPath simulate_vmp(const VonMisesParams& params, double theta0, Eigen::Index n, double dt,
                         std::uint64_t seed);

/// Transition density of the circular Brownian motion over `elapsed` time:
/// the wrapped normal WN(theta_s, sigma sqrt(elapsed)).
double cbm_tpd(double theta_t, double theta_s, double elapsed, const CbmParams& params);

/// Constants of the approximate von Mises TPD at a given elapsed time:
/// gamma = kappa I1(kappa)/I0(kappa), q = exp(-gamma sigma^2 t), and the
/// normalization constant C = 1 / integral of the unnormalized density.
struct TpdConstants {
    double gamma = 0.0;
    double q = 0.0;
    double norm_const = 0.0;
};

/// Unnormalized approximate von Mises transition density:
///   sum_k exp(-gamma sqrt(q) (theta_t + 2 pi k - theta_0)^2 / (2(1-q)))
///   * (2 pi I0(kappa))^{-(1-sqrt(q))/(1+sqrt(q))}
///   * exp(kappa (cos(theta_t - mu) - sqrt(q) cos(theta_0 - mu)) / (1+sqrt(q)))
/// assembled in log space. Throws NearSingularTimeError when
/// gamma sigma^2 t < 1e-14 (q numerically 1).
double vmp_tpd_unnormalized(double theta_t, double theta0, double elapsed,
                            const VonMisesParams& params);

/// Normalization constant by composite trapezoid quadrature on a uniform
/// circular grid (spectrally accurate for this periodic integrand).
TpdConstants vmp_tpd_norm_const(double theta0, double elapsed, const VonMisesParams& params,
                                Eigen::Index grid_points = 2048);

/// Normalized approximate transition density. Below the short-time cutoff
/// (gamma sigma^2 t < 1e-14) evaluates the analytic t->0 limit, a wrapped
/// normal with scale sigma sqrt(t), instead of the singular formula.
double vmp_tpd(double theta_t, double theta0, double elapsed, const VonMisesParams& params);

/// vmp_tpd evaluated on a set of angles, sharing one normalization constant.
Eigen::ArrayXd vmp_tpd(const Eigen::ArrayXd& theta, double theta0, double elapsed,
                       const VonMisesParams& params);

namespace detail {

/// Per-(params, elapsed) ingredients of the TPD formula.
struct VmpTpdTerms {
    double kappa, gamma, q, sqrt_q;
    double scale;      // sqrt((1-q)/(gamma sqrt(q))), Gaussian-kernel scale
    double tilt;       // kappa / (1 + sqrt(q))
    double tilt_prev;  // kappa sqrt(q) / (1 + sqrt(q))
    double stat_exp;   // (1 - sqrt(q)) / (1 + sqrt(q))
    double log_i0;
    double mu;
    bool short_time;   // gamma sigma^2 t < 1e-14: use WN(sigma sqrt(t)) limit
    double wn_scale;   // sigma sqrt(t)

    static VmpTpdTerms make(const VonMisesParams& params, double elapsed);
    double log_unnormalized(double theta_t, double theta0) const;
};

}  // namespace detail

/// Fast evaluator of log vmp_tpd for many transitions sharing one
/// (params, dt): the theta_0-dependent log-normalizer is precomputed on a
/// uniform grid (same trapezoid rule as vmp_tpd_norm_const, arranged as an
/// all-positive circular convolution) and interpolated with a periodic cubic.
class VmpTransitionCache {
public:
    /// grid_points <= 0 sizes the grid automatically from the kernel scale.
    VmpTransitionCache(const VonMisesParams& params, double dt, Eigen::Index grid_points = 0);

    /// log of the normalized transition density p(theta_next | theta_prev, dt).
    double log_tpd(double theta_next, double theta_prev) const;

    /// log C(theta_prev) (interpolated); exposed for cross-checking against
    /// vmp_tpd_norm_const.
    double log_norm_const(double theta_prev) const;

private:
    detail::VmpTpdTerms terms_;
    Eigen::ArrayXd log_norm_;  // on circle_grid(grid_points), mu = 0 frame
    double dgrid_ = 0.0;
    bool narrow_kernel_ = false;  // kernel below grid resolution: Laplace form
};

}  // namespace circdiff

#endif  // CIRCDIFF_DIFFUSION_HPP
