#ifndef CIRCDIFF_PDE_HPP
#define CIRCDIFF_PDE_HPP

#include <vector>

#include "circdiff/densities.hpp"
#include "circdiff/diffusion.hpp"

namespace circdiff::pde {

/// Crank-Nicolson solution of the von Mises forward equation
///   dp/dt = (sigma^2/2) p_theta_theta + lambda sin(theta - mu) p_theta
///           + lambda cos(theta - mu) p
/// on (-pi, pi] with periodic boundary, from a single-cell point mass at
/// theta0's nearest cell. Snapshots are taken at the steps nearest the
/// requested times; every snapshot is renormalized to unit mass.
struct CnSolution {
    std::vector<double> times;            // snapshot times, step-aligned
    std::vector<DensityGrid> densities;
    double max_mass_defect = 0.0;         // max |mass - 1| before clipping
    double max_clipped_mass = 0.0;        // largest negative mass clipped per step
    Eigen::Index last_clip_step = 0;      // 0 when no step ever clipped
};

/// k >= 16 spatial cells, m >= 2 time steps of size horizon/m. Empty
/// snapshot_times means a single snapshot at the horizon. Spatial derivatives
/// are centered second-order differences; the cyclic tridiagonal system is
/// solved by the Sherman-Morrison corrected Thomas algorithm, factored once.
CnSolution crank_nicolson_vmp(const VonMisesParams& params, double theta0, double horizon,
                              Eigen::Index k, Eigen::Index m,
                              std::vector<double> snapshot_times = {});

struct TpdValidationRow {
    double kappa, lambda, sigma, mu, t, hellinger;
};

/// Hellinger distance between the analytic approximate TPD and the
/// Crank-Nicolson solution, for every (params, t) pair. One PDE solve per
/// parameter set with snapshots at all requested times.
std::vector<TpdValidationRow> validate_tpd(const std::vector<VonMisesParams>& params_list,
                                           double theta0, const std::vector<double>& times,
                                           Eigen::Index k, Eigen::Index m);

}  // namespace circdiff::pde

#endif  // CIRCDIFF_PDE_HPP
