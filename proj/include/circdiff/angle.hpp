#ifndef CIRCDIFF_ANGLE_HPP
#define CIRCDIFF_ANGLE_HPP

#include <Eigen/Core>

namespace circdiff {

/// Canonical representative of x mod 2*pi in (-pi, pi].
/// Throws std::invalid_argument for non-finite input.
double wrap(double radians);

/// Signed minimal difference a - b as an angle in (-pi, pi].
double angular_diff(double a, double b);

/// An angle holding its canonical representative in (-pi, pi].
class Angle {
public:
    Angle() = default;
    explicit Angle(double radians);

    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

/// Direction of the resultant vector, atan2(sum sin, sum cos).
/// Throws DegenerateMeanError when the resultant length is numerically zero
/// (e.g. an antipodal pair), std::invalid_argument for an empty sample.
double circular_mean(const Eigen::ArrayXd& angles);

struct BiasConcentration {
    double bias;           // atan2(S, C), radians
    double concentration;  // sqrt(S^2 + C^2), in [0, 1]
};

/// Circular bias and concentration of a set of estimates around mu_true,
/// with S and C the replication averages of sin(mu - mu_hat_k) and
/// cos(mu - mu_hat_k). Normalizing by the replication count keeps the
/// concentration in [0, 1]; the bias is unaffected by the normalization.
BiasConcentration bias_and_concentration(double mu_true, const Eigen::ArrayXd& estimates);

}  // namespace circdiff

#endif  // CIRCDIFF_ANGLE_HPP
