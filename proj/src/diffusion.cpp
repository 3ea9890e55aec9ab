#include "circdiff/diffusion.hpp"

#include <cmath>
#include <stdexcept>

#include "circdiff/bessel.hpp"
#include "circdiff/densities.hpp"
#include "circdiff/errors.hpp"
#include "circdiff/rng.hpp"

namespace circdiff {
namespace {

constexpr double kShortTimeCutoff = 1e-14;  // on gamma * sigma^2 * t

void check_sim_args(Eigen::Index n, double dt, const char* who) {
    if (n < 2) throw std::invalid_argument(std::string(who) + ": need n >= 2");
    if (!(dt > 0.0)) throw std::invalid_argument(std::string(who) + ": need dt > 0");
}

Eigen::ArrayXd uniform_times(Eigen::Index n, double dt) {
    return dt * Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
}

}  // namespace

void CbmParams::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("CbmParams: sigma must be > 0");
}

void VonMisesParams::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("VonMisesParams: lambda must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("VonMisesParams: sigma must be > 0");
}

void AngularPath::validate() const {
    if (times.size() != angles.size() || times.size() < 2) {
        throw std::invalid_argument("AngularPath: need matching times/angles, length >= 2");
    }
    for (Eigen::Index i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("AngularPath: times must be strictly increasing");
        }
    }
}

AngularPath simulate_cbm(const CbmParams& params, double theta0, Eigen::Index n, double dt,
                         std::uint64_t seed) {
    params.validate();
    check_sim_args(n, dt, "simulate_cbm");
    NormalSampler rng(seed);
    AngularPath path{uniform_times(n, dt), Eigen::ArrayXd(n)};
    double x = wrap(theta0);
    path.angles[0] = x;
    const double step_sd = params.sigma * std::sqrt(dt);
    for (Eigen::Index i = 1; i < n; ++i) {
        x = wrap(x + step_sd * rng.next());
        path.angles[i] = x;
    }
    return path;
}

AngularPath simulate_vmp(const VonMisesParams& params, double theta0, Eigen::Index n, double dt,
                         std::uint64_t seed) {
    params.validate();
    check_sim_args(n, dt, "simulate_vmp");
    NormalSampler rng(seed);
    AngularPath path{uniform_times(n, dt), Eigen::ArrayXd(n)};
    double x = wrap(theta0);
    path.angles[0] = x;
    const double step_sd = params.sigma * std::sqrt(dt);
    const double mu = params.mu.value();
    for (Eigen::Index i = 1; i < n; ++i) {
        x = wrap(x - params.lambda * std::sin(x - mu) * dt + step_sd * rng.next());
        path.angles[i] = x;
    }
    return path;
}

double cbm_tpd(double theta_t, double theta_s, double elapsed, const CbmParams& params) {
    params.validate();
    if (!(elapsed > 0.0)) throw std::invalid_argument("cbm_tpd: need elapsed > 0");
    return wrapped_normal_pdf(theta_t, theta_s, params.sigma * std::sqrt(elapsed));
}

namespace detail {

VmpTpdTerms VmpTpdTerms::make(const VonMisesParams& params, double elapsed) {
    params.validate();
    if (!(elapsed > 0.0)) throw std::invalid_argument("vmp_tpd: need elapsed > 0");
    VmpTpdTerms t{};
    t.kappa = params.kappa();
    t.gamma = t.kappa * bessel_ratio(t.kappa);
    t.mu = params.mu.value();
    t.wn_scale = params.sigma * std::sqrt(elapsed);
    const double gs2t = t.gamma * params.sigma * params.sigma * elapsed;
    t.short_time = gs2t < kShortTimeCutoff;
    if (t.short_time) return t;
    t.q = std::exp(-gs2t);
    t.sqrt_q = std::sqrt(t.q);
    t.scale = std::sqrt((1.0 - t.q) / (t.gamma * t.sqrt_q));
    t.tilt = t.kappa / (1.0 + t.sqrt_q);
    t.tilt_prev = t.kappa * t.sqrt_q / (1.0 + t.sqrt_q);
    t.stat_exp = (1.0 - t.sqrt_q) / (1.0 + t.sqrt_q);
    t.log_i0 = log_bessel_i0(t.kappa);
    return t;
}

double VmpTpdTerms::log_unnormalized(double theta_t, double theta0) const {
    return log_wrapped_gaussian_sum(theta_t - theta0, scale) -
           stat_exp * (std::log(2.0 * M_PI) + log_i0) +
           tilt * std::cos(theta_t - mu) - tilt_prev * std::cos(theta0 - mu);
}

}  // namespace detail

double vmp_tpd_unnormalized(double theta_t, double theta0, double elapsed,
                            const VonMisesParams& params) {
    const auto terms = detail::VmpTpdTerms::make(params, elapsed);
    if (terms.short_time) {
        throw NearSingularTimeError(
            "vmp_tpd_unnormalized: gamma*sigma^2*t < 1e-14; use the wrapped-normal "
            "short-time limit");
    }
    return std::exp(terms.log_unnormalized(theta_t, theta0));
}

TpdConstants vmp_tpd_norm_const(double theta0, double elapsed, const VonMisesParams& params,
                                Eigen::Index grid_points) {
    if (grid_points < 256) {
        throw std::invalid_argument("vmp_tpd_norm_const: need grid_points >= 256");
    }
    const auto terms = detail::VmpTpdTerms::make(params, elapsed);
    if (terms.short_time) {
        throw NearSingularTimeError("vmp_tpd_norm_const: gamma*sigma^2*t < 1e-14");
    }
    const Eigen::ArrayXd grid = circle_grid(grid_points);
    Eigen::ArrayXd logp(grid_points);
    for (Eigen::Index i = 0; i < grid_points; ++i) {
        logp[i] = terms.log_unnormalized(grid[i], theta0);
    }
    const double m = logp.maxCoeff();
    const double integral =
        (logp - m).exp().sum() * (2.0 * M_PI / static_cast<double>(grid_points));
    return {terms.gamma, terms.q, std::exp(-m) / integral};
}

double vmp_tpd(double theta_t, double theta0, double elapsed, const VonMisesParams& params) {
    const auto terms = detail::VmpTpdTerms::make(params, elapsed);
    if (terms.short_time) {
        return wrapped_normal_pdf(theta_t, theta0, terms.wn_scale);
    }
    const auto c = vmp_tpd_norm_const(theta0, elapsed, params);
    return c.norm_const * std::exp(terms.log_unnormalized(theta_t, theta0));
}

Eigen::ArrayXd vmp_tpd(const Eigen::ArrayXd& theta, double theta0, double elapsed,
                       const VonMisesParams& params) {
    const auto terms = detail::VmpTpdTerms::make(params, elapsed);
    if (terms.short_time) {
        return wrapped_normal_pdf(theta, theta0, terms.wn_scale);
    }
    const auto c = vmp_tpd_norm_const(theta0, elapsed, params);
    Eigen::ArrayXd out(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        out[i] = c.norm_const * std::exp(terms.log_unnormalized(theta[i], theta0));
    }
    return out;
}

namespace {

// Periodic Catmull-Rom interpolation on a uniform grid starting at
// -pi + dgrid (circle_grid layout).
double interp_periodic_cubic(const Eigen::ArrayXd& y, double dgrid, double x) {
    const auto n = y.size();
    const double pos = (wrap(x) + M_PI) / dgrid - 1.0;
    const auto i1 = static_cast<Eigen::Index>(std::floor(pos));
    const double u = pos - static_cast<double>(i1);
    auto at = [&](Eigen::Index i) { return y[((i % n) + n) % n]; };
    const double y0 = at(i1 - 1), y1 = at(i1), y2 = at(i1 + 1), y3 = at(i1 + 2);
    const double a = -0.5 * y0 + 1.5 * y1 - 1.5 * y2 + 0.5 * y3;
    const double b = y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3;
    const double c = 0.5 * (y2 - y0);
    return ((a * u + b) * u + c) * u + y1;
}

}  // namespace

VmpTransitionCache::VmpTransitionCache(const VonMisesParams& params, double dt,
                                       Eigen::Index grid_points)
    : terms_(detail::VmpTpdTerms::make(params, dt)) {
    if (terms_.short_time) return;
    // Size the grid to the Gaussian kernel (>= 8 cells per scale) unless the
    // caller pinned it. Kernels too narrow for the largest grid switch to the
    // Laplace closed form of the normalizer instead.
    constexpr Eigen::Index kMaxGrid = 8192;
    if (grid_points <= 0 && terms_.scale < 8.0 * (2.0 * M_PI / kMaxGrid)) {
        narrow_kernel_ = true;
        return;
    }
    Eigen::Index g = grid_points;
    if (g <= 0) {
        g = 512;
        while (g < kMaxGrid && terms_.scale < 8.0 * (2.0 * M_PI / static_cast<double>(g))) g *= 2;
    }
    dgrid_ = 2.0 * M_PI / static_cast<double>(g);

    // C(theta0)^{-1} = (2 pi I0)^{-stat_exp} e^{-tilt_prev cos(theta0 - mu)} h(theta0),
    // h(theta0) = integral S(theta - theta0) e^{tilt cos(theta - mu)} d theta.
    // Work in the mu = 0 frame; h is a circular convolution evaluated by the
    // same uniform trapezoid rule as vmp_tpd_norm_const, with all-positive
    // summands (the tilt factor is scaled by its maximum to avoid overflow).
    Eigen::ArrayXd kernel(g);  // S at lag angles l * dgrid
    for (Eigen::Index l = 0; l < g; ++l) {
        kernel[l] = std::exp(
            log_wrapped_gaussian_sum(static_cast<double>(l) * dgrid_, terms_.scale));
    }
    const Eigen::ArrayXd grid = circle_grid(g);
    const Eigen::VectorXd tilt_scaled = (terms_.tilt * (grid.cos() - 1.0)).exp();
    const Eigen::VectorXd kvec = kernel;
    log_norm_.resize(g);
    // h is even in theta0 (mu = 0 frame): compute half, mirror the rest
    for (Eigen::Index j = g / 2 - 1; j < g; ++j) {
        const double acc = kvec.head(g - j).dot(tilt_scaled.tail(g - j)) +
                           kvec.tail(j).dot(tilt_scaled.head(j));
        const double log_h = std::log(acc * dgrid_) + terms_.tilt;
        log_norm_[j] = terms_.stat_exp * (std::log(2.0 * M_PI) + terms_.log_i0) +
                       terms_.tilt_prev * std::cos(grid[j]) - log_h;
    }
    for (Eigen::Index j = 0; j + 1 < g / 2; ++j) {
        log_norm_[j] = log_norm_[g - 2 - j];
    }
}

double VmpTransitionCache::log_norm_const(double theta_prev) const {
    if (terms_.short_time) return 0.0;  // the WN limit is already normalized
    if (narrow_kernel_) {
        const double common = terms_.stat_exp * (std::log(2.0 * M_PI) + terms_.log_i0);
        // h(theta0) = integral of the near-Dirac kernel against the tilt:
        // Laplace form with the quadratic cosine expansion resummed exactly
        const double phi = theta_prev - terms_.mu;
        const double c1 = terms_.tilt, s = terms_.scale;
        const double a = c1 * s * s * std::cos(phi);
        const double b = c1 * s * std::sin(phi);
        const double log_h = std::log(s * std::sqrt(2.0 * M_PI)) + c1 * std::cos(phi) -
                             0.5 * std::log1p(a) + b * b / (2.0 * (1.0 + a));
        return common + terms_.tilt_prev * std::cos(phi) - log_h;
    }
    return interp_periodic_cubic(log_norm_, dgrid_, theta_prev - terms_.mu);
}

double VmpTransitionCache::log_tpd(double theta_next, double theta_prev) const {
    if (terms_.short_time) {
        return log_wrapped_gaussian_sum(theta_next - theta_prev, terms_.wn_scale) -
               std::log(terms_.wn_scale * std::sqrt(2.0 * M_PI));
    }
    return terms_.log_unnormalized(theta_next, theta_prev) + log_norm_const(theta_prev);
}

}  // namespace circdiff
