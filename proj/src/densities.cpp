#include "circdiff/densities.hpp"

#include <cmath>
#include <stdexcept>

#include "circdiff/angle.hpp"
#include "circdiff/bessel.hpp"

namespace circdiff {
namespace {

constexpr double kDualScaleCutoff = 4.0;  // switch to theta-function form
constexpr double kTailExponent = 30.0;    // e^-30 ~ 1e-13 omitted tail

void check_scale(double scale, const char* who) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument(std::string(who) + ": scale must be positive");
    }
}

}  // namespace

Eigen::ArrayXd circle_grid(Eigen::Index k) {
    const double dtheta = 2.0 * M_PI / static_cast<double>(k);
    return Eigen::ArrayXd::LinSpaced(k, -M_PI + dtheta, M_PI);
}

DensityGrid DensityGrid::uniform(Eigen::Index k) {
    DensityGrid g;
    g.theta = circle_grid(k);
    g.values = Eigen::ArrayXd::Zero(k);
    g.dtheta = 2.0 * M_PI / static_cast<double>(k);
    return g;
}

double log_wrapped_gaussian_sum(double delta, double scale) {
    if (scale < kDualScaleCutoff) {
        const int kmax = std::max(3, static_cast<int>(std::ceil(8.0 * scale / (2.0 * M_PI))));
        const double d = wrap(delta);
        // log-sum-exp over translates; the k=0 term of the wrapped
        // representative dominates
        const double m = -d * d / (2.0 * scale * scale);
        double acc = 0.0;
        for (int k = -kmax; k <= kmax; ++k) {
            const double x = d + 2.0 * M_PI * k;
            acc += std::exp(-x * x / (2.0 * scale * scale) - m);
        }
        return m + std::log(acc);
    }
    // s*sqrt(2 pi) * WN(delta; 0, s) with WN in Fourier form:
    // (1/2pi)(1 + 2 sum_m e^{-m^2 s^2/2} cos(m delta))
    double acc = 0.0;
    for (int m = 1; m * m * scale * scale / 2.0 < kTailExponent; ++m) {
        acc += 2.0 * std::exp(-0.5 * m * m * scale * scale) * std::cos(m * delta);
    }
    return std::log(scale / std::sqrt(2.0 * M_PI)) + std::log1p(acc);
}

double wrapped_normal_pdf(double theta, double center, double scale) {
    check_scale(scale, "wrapped_normal_pdf");
    return std::exp(log_wrapped_gaussian_sum(theta - center, scale)) /
           (scale * std::sqrt(2.0 * M_PI));
}

Eigen::ArrayXd wrapped_normal_pdf(const Eigen::ArrayXd& theta, double center, double scale) {
    check_scale(scale, "wrapped_normal_pdf");
    return theta.unaryExpr([&](double t) { return wrapped_normal_pdf(t, center, scale); });
}

double log_von_mises_pdf(double theta, double mu, double kappa) {
    if (!(kappa >= 0.0)) {
        throw std::invalid_argument("von_mises_pdf: kappa must be >= 0");
    }
    return kappa * std::cos(theta - mu) - std::log(2.0 * M_PI) - log_bessel_i0(kappa);
}

double von_mises_pdf(double theta, double mu, double kappa) {
    return std::exp(log_von_mises_pdf(theta, mu, kappa));
}

Eigen::ArrayXd von_mises_pdf(const Eigen::ArrayXd& theta, double mu, double kappa) {
    if (!(kappa >= 0.0)) {
        throw std::invalid_argument("von_mises_pdf: kappa must be >= 0");
    }
    const double log_norm = std::log(2.0 * M_PI) + log_bessel_i0(kappa);
    return (kappa * (theta - mu).cos() - log_norm).exp();
}

double hellinger_discrete(const DensityGrid& p, const DensityGrid& q) {
    if (p.theta.size() != q.theta.size() || p.values.size() != p.theta.size() ||
        q.values.size() != q.theta.size()) {
        throw std::invalid_argument("hellinger_discrete: grid size mismatch");
    }
    if (std::abs(p.dtheta - q.dtheta) > 1e-12 ||
        std::abs(p.theta[0] - q.theta[0]) > 1e-9) {
        throw std::invalid_argument("hellinger_discrete: grids differ");
    }
    if ((p.values < 0.0).any() || (q.values < 0.0).any()) {
        throw std::invalid_argument("hellinger_discrete: negative density values");
    }
    const double ss =
        ((p.values * p.dtheta).sqrt() - (q.values * q.dtheta).sqrt()).square().sum();
    return std::sqrt(0.5 * ss);
}

}  // namespace circdiff
