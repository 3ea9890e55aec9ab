#include "circdiff/angle.hpp"

#include <cmath>
#include <stdexcept>

#include "circdiff/errors.hpp"

namespace circdiff {

double wrap(double radians) {
    if (!std::isfinite(radians)) {
        throw std::invalid_argument("wrap: non-finite angle");
    }
    double y = std::remainder(radians, 2.0 * M_PI);  // [-pi, pi]
    if (y <= -M_PI) {
        y = M_PI;
    }
    return y;
}

double angular_diff(double a, double b) { return wrap(a - b); }

Angle::Angle(double radians) : value_(wrap(radians)) {}

double circular_mean(const Eigen::ArrayXd& angles) {
    if (angles.size() == 0) {
        throw std::invalid_argument("circular_mean: empty sample");
    }
    const double s = angles.sin().sum();
    const double c = angles.cos().sum();
    const double resultant = std::hypot(s, c);
    if (resultant < 1e-8 * static_cast<double>(angles.size())) {
        throw DegenerateMeanError("circular_mean: zero resultant length");
    }
    return std::atan2(s, c);
}

BiasConcentration bias_and_concentration(double mu_true, const Eigen::ArrayXd& estimates) {
    if (estimates.size() == 0) {
        throw std::invalid_argument("bias_and_concentration: empty sample");
    }
    const double n = static_cast<double>(estimates.size());
    const double s = (mu_true - estimates).sin().sum() / n;
    const double c = (mu_true - estimates).cos().sum() / n;
    return {std::atan2(s, c), std::min(std::hypot(s, c), 1.0)};
}

}  // namespace circdiff
