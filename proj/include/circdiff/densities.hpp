#ifndef CIRCDIFF_DENSITIES_HPP
#define CIRCDIFF_DENSITIES_HPP

#include <Eigen/Core>

namespace circdiff {

/// Probability density sampled on a uniform grid of k points spanning
/// (-pi, pi], theta_j = -pi + (j+1) * dtheta for j = 0..k-1.
struct DensityGrid {
    Eigen::ArrayXd theta;
    Eigen::ArrayXd values;
    double dtheta = 0.0;

    static DensityGrid uniform(Eigen::Index k);

    double mass() const { return values.sum() * dtheta; }
    void renormalize() { values /= mass(); }
};

/// Uniform grid points spanning (-pi, pi].
Eigen::ArrayXd circle_grid(Eigen::Index k);

/// log sum_k exp(-(delta + 2 pi k)^2 / (2 scale^2)), the unnormalized wrapped
/// Gaussian kernel. Direct truncated sum (|k| <= max(3, ceil(8 scale / 2pi)),
/// omitted tail < 1e-12) for small scales; the theta-function dual for large
/// scales, where it needs only a couple of cosine terms for the same accuracy.
double log_wrapped_gaussian_sum(double delta, double scale);

/// Wrapped normal density at theta for the given center and scale (> 0).
double wrapped_normal_pdf(double theta, double center, double scale);
Eigen::ArrayXd wrapped_normal_pdf(const Eigen::ArrayXd& theta, double center, double scale);

/// von Mises density exp(kappa cos(theta - mu)) / (2 pi I0(kappa)),
/// evaluated in log space so large kappa cannot overflow.
double von_mises_pdf(double theta, double mu, double kappa);
double log_von_mises_pdf(double theta, double mu, double kappa);
Eigen::ArrayXd von_mises_pdf(const Eigen::ArrayXd& theta, double mu, double kappa);

/// Discrete Hellinger distance between two densities on identical grids,
/// computed on cell masses p_i * dtheta so the value is in [0, 1] and
/// independent of grid resolution.
double hellinger_discrete(const DensityGrid& p, const DensityGrid& q);

}  // namespace circdiff

#endif  // CIRCDIFF_DENSITIES_HPP
