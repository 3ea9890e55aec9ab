#ifndef CIRCDIFF_OPTIMIZE_HPP
#define CIRCDIFF_OPTIMIZE_HPP

#include <functional>

#include <Eigen/Core>

namespace circdiff::stochcorr {

struct DfoOptions {
    double param_tol = 1e-6;  // stop when the simplex spread per coordinate is below this
    int max_evals = 2000;
    double initial_step = 0.0;  // 0: pick per coordinate from x0 / bounds
};

struct DfoResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Derivative-free local maximization under box bounds: Nelder-Mead with
/// dimension-adaptive expansion/contraction parameters and projection of
/// candidate points onto the box. Deterministic; always returns the best
/// iterate seen. Non-finite objective values are treated as -infinity.
/// Bounds entries may be +-infinity; x0 must lie inside the box.
DfoResult dfo_maximize(const Objective& objective, const Eigen::VectorXd& x0,
                       const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                       const DfoOptions& opts = {});

}  // namespace circdiff::stochcorr

#endif  // CIRCDIFF_OPTIMIZE_HPP
