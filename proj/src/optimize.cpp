#include "circdiff/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace circdiff::stochcorr {
namespace {

double clampv(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

DfoResult dfo_maximize(const Objective& objective, const Eigen::VectorXd& x0,
                       const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                       const DfoOptions& opts) {
    const auto n = x0.size();
    if (n == 0) throw std::invalid_argument("dfo_maximize: empty parameter vector");
    if (lower.size() != n || upper.size() != n) {
        throw std::invalid_argument("dfo_maximize: bounds size mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (x0[i] < lower[i] || x0[i] > upper[i]) {
            throw std::invalid_argument("dfo_maximize: x0 outside bounds");
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    int evals = 0;
    auto project = [&](Eigen::VectorXd& x) {
        for (Eigen::Index i = 0; i < n; ++i) x[i] = clampv(x[i], lower[i], upper[i]);
    };
    auto f = [&](Eigen::VectorXd& x) {
        project(x);
        ++evals;
        const double v = objective(x);
        return std::isfinite(v) ? -v : inf;  // minimize -objective
    };

    // Gao-Han adaptive parameters
    const double nd = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / nd;
    const double gamma = 0.75 - 1.0 / (2.0 * nd);
    const double delta = 1.0 - 1.0 / nd;

    std::vector<Eigen::VectorXd> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    fv[0] = f(simplex[0]);
    for (Eigen::Index i = 0; i < n; ++i) {
        double step = opts.initial_step;
        if (step <= 0.0) {
            step = (simplex[0][i] != 0.0) ? 0.10 * std::abs(simplex[0][i]) : 0.10;
            if (std::isfinite(lower[i]) && std::isfinite(upper[i])) {
                step = std::min(step, 0.25 * (upper[i] - lower[i]));
            }
        }
        // step away from an active upper bound
        if (simplex[0][i] + step > upper[i]) step = -step;
        simplex[i + 1][i] += step;
        fv[i + 1] = f(simplex[i + 1]);
    }

    std::vector<int> order(n + 1);
    auto sort_simplex = [&]() {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    };

    while (evals < opts.max_evals) {
        sort_simplex();
        const int best = order[0], worst = order[n], second_worst = order[n - 1];

        double spread = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double lo = simplex[0][i], hi = simplex[0][i];
            for (int v = 1; v <= n; ++v) {
                lo = std::min(lo, simplex[v][i]);
                hi = std::max(hi, simplex[v][i]);
            }
            spread = std::max(spread, hi - lo);
        }
        if (spread <= opts.param_tol) {
            return {simplex[best], -fv[best], evals, true};
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int v = 0; v <= n; ++v) {
            if (v != worst) centroid += simplex[v];
        }
        centroid /= nd;

        Eigen::VectorXd xr = centroid + alpha * (centroid - simplex[worst]);
        const double fr = f(xr);
        if (fr < fv[best]) {
            Eigen::VectorXd xe = centroid + beta * (xr - centroid);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[worst] = xe; fv[worst] = fe;
            } else {
                simplex[worst] = xr; fv[worst] = fr;
            }
        } else if (fr < fv[second_worst]) {
            simplex[worst] = xr; fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            Eigen::VectorXd xc = outside
                ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                : Eigen::VectorXd(centroid - gamma * (centroid - simplex[worst]));
            const double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = xc; fv[worst] = fc;
            } else {
                // shrink toward the best vertex
                for (int v = 0; v <= n; ++v) {
                    if (v == best) continue;
                    simplex[v] = simplex[best] + delta * (simplex[v] - simplex[best]);
                    fv[v] = f(simplex[v]);
                }
            }
        }
    }

    sort_simplex();
    return {simplex[order[0]], -fv[order[0]], evals, false};
}

}  // namespace circdiff::stochcorr
