#include "circdiff/stochcorr.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "circdiff/angle.hpp"
#include "circdiff/densities.hpp"
#include "circdiff/errors.hpp"
#include "circdiff/estimation.hpp"
#include "circdiff/parallel.hpp"
#include "circdiff/rng.hpp"

namespace circdiff::stochcorr {
namespace {

double clamp_rho(double rho) {
    return std::clamp(rho, -1.0 + kRhoClamp, 1.0 - kRhoClamp);
}

void check_rho_alignment(const RhoPath& rho, Eigen::Index n_returns, const char* who) {
    if (rho.rhos.size() != n_returns + 1) {
        throw std::invalid_argument(std::string(who) + ": rho path must have one entry per "
                                    "observation (returns + 1)");
    }
    if ((rho.rhos.abs() > 1.0 - kRhoClamp / 2).any()) {
        throw std::invalid_argument(std::string(who) + ": |rho| too close to 1");
    }
}

// Pearson correlation of two equal-length spans.
double pearson(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
    const double ma = a.mean(), mb = b.mean();
    const double va = (a - ma).square().sum(), vb = (b - mb).square().sum();
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return ((a - ma) * (b - mb)).sum() / std::sqrt(va * vb);
}

// Linear-interpolation percentile (the "type 7" convention).
double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double rank = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= v.size()) return v.back();
    const double frac = rank - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

Eigen::ArrayXd knots_to_path(const Eigen::ArrayXd& knot_values,
                             const std::vector<Eigen::Index>& knot_index, Eigen::Index n) {
    Eigen::ArrayXd out(n);
    for (std::size_t seg = 0; seg + 1 < knot_index.size(); ++seg) {
        const Eigen::Index i0 = knot_index[seg], i1 = knot_index[seg + 1];
        const double v0 = knot_values[static_cast<Eigen::Index>(seg)];
        const double v1 = knot_values[static_cast<Eigen::Index>(seg) + 1];
        for (Eigen::Index i = i0; i <= i1; ++i) {
            const double w = (i1 == i0) ? 0.0
                                        : static_cast<double>(i - i0) / static_cast<double>(i1 - i0);
            out[i] = clamp_rho(v0 + w * (v1 - v0));
        }
    }
    return out;
}

}  // namespace

void GbmLeg::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("GbmLeg: sigma must be > 0");
    if (!(s0 > 0.0)) throw std::invalid_argument("GbmLeg: s0 must be > 0");
}

void CorrProcessSpec::validate() const {
    if (kind == CorrKind::circular_brownian) {
        cbm.validate();
    } else {
        vmp.validate();
    }
}

StochCorrSim simulate_stochcorr(const GbmLeg& leg1, const GbmLeg& leg2,
                                const CorrProcessSpec& spec, double theta0, Eigen::Index n,
                                double dt, std::uint64_t seed) {
    leg1.validate();
    leg2.validate();
    spec.validate();
    if (n < 2) throw std::invalid_argument("simulate_stochcorr: need n >= 2");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_stochcorr: need dt > 0");

    const std::uint64_t theta_seed = derive_seed(seed, 0);
    AngularPath theta = (spec.kind == CorrKind::circular_brownian)
                            ? simulate_cbm(spec.cbm, theta0, n, dt, theta_seed)
                            : simulate_vmp(spec.vmp, theta0, n, dt, theta_seed);

    NormalSampler rng(derive_seed(seed, 1));
    StochCorrSim sim;
    sim.hidden_theta = std::move(theta);
    sim.prices1.resize(n);
    sim.prices2.resize(n);
    double log1 = std::log(leg1.s0), log2 = std::log(leg2.s0);
    sim.prices1[0] = leg1.s0;
    sim.prices2[0] = leg2.s0;
    const double m1 = (leg1.mu - leg1.sigma * leg1.sigma / 2.0) * dt;
    const double m2 = (leg2.mu - leg2.sigma * leg2.sigma / 2.0) * dt;
    const double sdt = std::sqrt(dt);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double rho = std::cos(sim.hidden_theta.angles[i]);
        const double z1 = rng.next();
        const double z2 = rng.next();
        log1 += m1 + leg1.sigma * sdt * z1;
        log2 += m2 + leg2.sigma * sdt * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
        sim.prices1[i + 1] = std::exp(log1);
        sim.prices2[i + 1] = std::exp(log2);
    }
    return sim;
}

Eigen::ArrayXd log_returns(const Eigen::ArrayXd& prices, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("log_returns: need dt > 0");
    if (prices.size() < 2) throw DataError("log_returns: need at least 2 prices");
    if ((prices <= 0.0).any()) throw DataError("log_returns: nonpositive price");
    Eigen::ArrayXd out(prices.size() - 1);
    for (Eigen::Index i = 0; i + 1 < prices.size(); ++i) {
        out[i] = std::log(prices[i + 1]) - std::log(prices[i]);
    }
    return out;
}

double conditional_loglik(const GbmLeg& leg1, const GbmLeg& leg2, const RhoPath& rho,
                          const Eigen::ArrayXd& returns1, const Eigen::ArrayXd& returns2,
                          double dt) {
    if (returns1.size() != returns2.size()) {
        throw std::invalid_argument("conditional_loglik: return series length mismatch");
    }
    check_rho_alignment(rho, returns1.size(), "conditional_loglik");
    const double m1 = (leg1.mu - leg1.sigma * leg1.sigma / 2.0) * dt;
    const double m2 = (leg2.mu - leg2.sigma * leg2.sigma / 2.0) * dt;
    const double v1 = leg1.sigma * leg1.sigma * dt;
    const double v2 = leg2.sigma * leg2.sigma * dt;
    double total = 0.0;
    for (Eigen::Index i = 0; i < returns1.size(); ++i) {
        const double r = rho.rhos[i];
        const double det = v1 * v2 * (1.0 - r * r);
        const double z1 = returns1[i] - m1;
        const double z2 = returns2[i] - m2;
        const double quad = (z1 * z1 * v2 - 2.0 * z1 * z2 * std::sqrt(v1 * v2) * r + z2 * z2 * v1) /
                            det;
        total += -0.5 * (quad + std::log(det));
    }
    return total;
}

double joint_loglik(const GbmLeg& leg1, const GbmLeg& leg2, const CorrProcessSpec& spec,
                    const RhoPath& rho, const Eigen::ArrayXd& returns1,
                    const Eigen::ArrayXd& returns2, double dt) {
    spec.validate();
    double total = conditional_loglik(leg1, leg2, rho, returns1, returns2, dt);
    const Eigen::ArrayXd theta = rho.rhos.unaryExpr([](double r) { return std::acos(r); });
    if (spec.kind == CorrKind::circular_brownian) {
        const double scale = spec.cbm.sigma * std::sqrt(dt);
        const double log_wn_norm = std::log(scale * std::sqrt(2.0 * M_PI));
        for (Eigen::Index i = 0; i + 1 < theta.size(); ++i) {
            total += log_wrapped_gaussian_sum(theta[i + 1] - theta[i], scale) - log_wn_norm;
        }
    } else {
        const VmpTransitionCache cache(spec.vmp, dt);
        for (Eigen::Index i = 0; i + 1 < theta.size(); ++i) {
            total += cache.log_tpd(theta[i + 1], theta[i]);
        }
    }
    for (Eigen::Index i = 1; i < rho.rhos.size(); ++i) {
        total -= 0.5 * std::log1p(-rho.rhos[i] * rho.rhos[i]);
    }
    return total;
}

double penalized_loglik(const GbmLeg& leg1, const GbmLeg& leg2, const CorrProcessSpec& spec,
                        const RhoPath& rho, const Eigen::ArrayXd& returns1,
                        const Eigen::ArrayXd& returns2, double dt, double lambda1,
                        double lambda2) {
    if (lambda1 < 0.0 || lambda2 < 0.0) {
        throw std::invalid_argument("penalized_loglik: penalty weights must be >= 0");
    }
    double total = joint_loglik(leg1, leg2, spec, rho, returns1, returns2, dt);
    const double steps = static_cast<double>(rho.rhos.size() - 1);  // T / dt
    const double rough =
        (rho.rhos.tail(rho.rhos.size() - 1) - rho.rhos.head(rho.rhos.size() - 1)).square().sum();
    total -= lambda1 * steps * rough;
    if (spec.kind == CorrKind::von_mises) {
        total -= lambda2 * spec.vmp.kappa();
    }
    return total;
}

namespace {

struct FitLayout {
    CorrKind kind;
    std::vector<Eigen::Index> knot_index;
    Eigen::Index n = 0;

    Eigen::Index dim() const {
        return 4 + (kind == CorrKind::von_mises ? 2 : 0) +
               static_cast<Eigen::Index>(knot_index.size());
    }
    Eigen::Index knot_offset() const { return 4 + (kind == CorrKind::von_mises ? 2 : 0); }
};

struct Candidate {
    GbmLeg leg1, leg2;
    CorrProcessSpec spec;
    RhoPath rho;
};

Candidate unpack(const Eigen::VectorXd& x, const FitLayout& layout, double corr_sigma,
                 const Eigen::ArrayXd& times) {
    Candidate c;
    c.leg1 = GbmLeg{x[0], std::max(x[1], 1e-6), 1.0};
    c.leg2 = GbmLeg{x[2], std::max(x[3], 1e-6), 1.0};
    c.spec.kind = layout.kind;
    if (layout.kind == CorrKind::circular_brownian) {
        c.spec.cbm.sigma = corr_sigma;
    } else {
        c.spec.vmp = VonMisesParams{Angle(wrap(x[5])), std::max(x[4], 1e-6), corr_sigma};
    }
    const Eigen::Index ko = layout.knot_offset();
    Eigen::ArrayXd knots(static_cast<Eigen::Index>(layout.knot_index.size()));
    for (Eigen::Index j = 0; j < knots.size(); ++j) knots[j] = clamp_rho(x[ko + j]);
    c.rho.times = times;
    c.rho.rhos = knots_to_path(knots, layout.knot_index, layout.n);
    return c;
}

}  // namespace

StochCorrFit fit_stochcorr(const Eigen::ArrayXd& prices1, const Eigen::ArrayXd& prices2,
                           double dt, CorrKind kind, const StochCorrHyper& hyper,
                           const StochCorrOptions& opts) {
    if (prices1.size() != prices2.size()) {
        throw DataError("fit_stochcorr: price series length mismatch");
    }
    const Eigen::Index n = prices1.size();
    const auto w = static_cast<Eigen::Index>(opts.rolling_window);
    if (n < w + 2) {
        throw DataError("fit_stochcorr: need at least rolling_window + 2 observations");
    }
    const Eigen::ArrayXd r1 = log_returns(prices1, dt);
    const Eigen::ArrayXd r2 = log_returns(prices2, dt);

    const double sd1 = std::sqrt((r1 - r1.mean()).square().sum() / static_cast<double>(r1.size()));
    const double sd2 = std::sqrt((r2 - r2.mean()).square().sum() / static_cast<double>(r2.size()));
    if (sd1 == 0.0 || sd2 == 0.0) {
        throw DataError("fit_stochcorr: constant price series");
    }

    FitDiagnostics diag;

    // rolling-window Pearson correlation initializer, edge-padded
    Eigen::ArrayXd rho0(n);
    for (Eigen::Index j = w; j < n; ++j) {
        const double c = pearson(r1.segment(j - w, w), r2.segment(j - w, w));
        const double clamped = clamp_rho(c);
        if (clamped != c) diag.clamped_init = true;
        rho0[j] = clamped;
    }
    rho0.head(w).setConstant(rho0[w]);

    FitLayout layout;
    layout.kind = kind;
    layout.n = n;
    const Eigen::Index spacing = std::max<Eigen::Index>(1, opts.knot_spacing);
    for (Eigen::Index i = 0; i < n; i += spacing) layout.knot_index.push_back(i);
    if (layout.knot_index.back() != n - 1) layout.knot_index.push_back(n - 1);

    const double s1_init = sd1 / std::sqrt(dt);
    const double s2_init = sd2 / std::sqrt(dt);
    const Eigen::Index dim = layout.dim();
    Eigen::VectorXd x(dim), lo(dim), hi(dim);
    const double inf = std::numeric_limits<double>::infinity();
    x[0] = r1.mean() / dt + s1_init * s1_init / 2.0;
    x[1] = s1_init;
    x[2] = r2.mean() / dt + s2_init * s2_init / 2.0;
    x[3] = s2_init;
    lo.head(4) << -inf, 1e-6, -inf, 1e-6;
    hi.head(4).setConstant(inf);
    if (kind == CorrKind::von_mises) {
        Eigen::ArrayXd theta0_arr(n);
        for (Eigen::Index i = 0; i < n; ++i) theta0_arr[i] = std::acos(rho0[i]);
        x[4] = 1.0;
        x[5] = circular_mean(theta0_arr);
        lo[4] = 1e-4;
        hi[4] = opts.lambda_max;
        lo[5] = -2.0 * M_PI;
        hi[5] = 2.0 * M_PI;
    }
    const Eigen::Index ko = layout.knot_offset();
    for (std::size_t j = 0; j < layout.knot_index.size(); ++j) {
        x[ko + static_cast<Eigen::Index>(j)] = rho0[layout.knot_index[j]];
        lo[ko + static_cast<Eigen::Index>(j)] = -1.0 + kRhoClamp;
        hi[ko + static_cast<Eigen::Index>(j)] = 1.0 - kRhoClamp;
    }

    const Eigen::ArrayXd times =
        dt * Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    const double lambda2 = (kind == CorrKind::circular_brownian) ? 0.0 : hyper.lambda2;

    double corr_sigma = opts.corr_sigma_floor;
    double best = -std::numeric_limits<double>::infinity();
    for (int round = 0; round < opts.outer_rounds; ++round) {
        // (re)estimate the latent sigma by quadratic variation of acos(rho)
        {
            const Candidate c = unpack(x, layout, corr_sigma, times);
            AngularPath theta_path;
            theta_path.times = times;
            theta_path.angles = c.rho.rhos.unaryExpr([](double r) { return std::acos(r); });
            corr_sigma = std::max(estimation::qv_sigma_hat(theta_path), opts.corr_sigma_floor);
        }
        const auto objective = [&](const Eigen::VectorXd& xx) {
            const Candidate c = unpack(xx, layout, corr_sigma, times);
            return penalized_loglik(c.leg1, c.leg2, c.spec, c.rho, r1, r2, dt, hyper.lambda1,
                                    lambda2);
        };
        DfoOptions dfo;
        dfo.param_tol = opts.param_tol;
        dfo.max_evals = opts.max_evals;
        const auto r = dfo_maximize(objective, x, lo, hi, dfo);
        x = r.x;
        diag.optimizer_evals += r.evals;
        diag.objective_trace.push_back(r.value);
        diag.outer_rounds = round + 1;
        if (round > 0 && r.value - best < opts.outer_tol) {
            best = std::max(best, r.value);
            break;
        }
        best = std::max(best, r.value);
    }
    if (!std::isfinite(best)) {
        throw NumericalError("fit_stochcorr: optimizer never found a finite objective");
    }

    Candidate c = unpack(x, layout, corr_sigma, times);
    StochCorrFit fit;
    fit.leg1 = c.leg1;
    fit.leg1.s0 = prices1[0];
    fit.leg2 = c.leg2;
    fit.leg2.s0 = prices2[0];
    fit.corr = c.spec;
    fit.rho_path = std::move(c.rho);
    fit.penalized_loglik = best;
    fit.hyper = StochCorrHyper{hyper.lambda1, lambda2};
    fit.dt = dt;
    fit.diagnostics = std::move(diag);
    return fit;
}

BootstrapBands bootstrap_rho_bands(const StochCorrFit& fit, int n_samples, double level,
                                   std::uint64_t seed, const StochCorrOptions& opts) {
    if (n_samples < 2) throw std::invalid_argument("bootstrap_rho_bands: need n_samples >= 2");
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("bootstrap_rho_bands: level must be in (0, 1)");
    }
    const Eigen::Index n = fit.rho_path.rhos.size();
    const double dt = fit.dt;
    const double m1 = (fit.leg1.mu - fit.leg1.sigma * fit.leg1.sigma / 2.0) * dt;
    const double m2 = (fit.leg2.mu - fit.leg2.sigma * fit.leg2.sigma / 2.0) * dt;
    const double sdt = std::sqrt(dt);

    std::vector<Eigen::ArrayXd> rho_samples(n_samples);
    std::vector<char> ok(n_samples, 0);
    parallel_for(n_samples, opts.workers, [&](int i) {
        // simulate prices from the fitted parameters with rho_hat frozen
        NormalSampler rng(derive_seed(seed, static_cast<std::uint64_t>(i) + 1));
        Eigen::ArrayXd p1(n), p2(n);
        double l1 = std::log(fit.leg1.s0), l2 = std::log(fit.leg2.s0);
        p1[0] = fit.leg1.s0;
        p2[0] = fit.leg2.s0;
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            const double rho = fit.rho_path.rhos[j];
            const double z1 = rng.next();
            const double z2 = rng.next();
            l1 += m1 + fit.leg1.sigma * sdt * z1;
            l2 += m2 + fit.leg2.sigma * sdt * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
            p1[j + 1] = std::exp(l1);
            p2[j + 1] = std::exp(l2);
        }
        try {
            auto refit = fit_stochcorr(p1, p2, dt, fit.corr.kind, fit.hyper, opts);
            rho_samples[i] = std::move(refit.rho_path.rhos);
            ok[i] = 1;
        } catch (const NumericalError&) {
            ok[i] = 0;
        } catch (const DataError&) {
            ok[i] = 0;
        }
    });

    BootstrapBands bands;
    bands.times = fit.rho_path.times;
    bands.level = level;
    bands.n_samples = n_samples;
    for (int i = 0; i < n_samples; ++i) {
        if (!ok[i]) ++bands.refit_failures;
    }
    if (5 * bands.refit_failures > n_samples) {
        throw NumericalError("bootstrap_rho_bands: more than 20% of refits failed (" +
                             std::to_string(bands.refit_failures) + "/" +
                             std::to_string(n_samples) + ")");
    }
    bands.lower.resize(n);
    bands.upper.resize(n);
    std::vector<double> pivots;
    pivots.reserve(static_cast<std::size_t>(n_samples));
    for (Eigen::Index t = 0; t < n; ++t) {
        pivots.clear();
        const double theta_hat = std::acos(fit.rho_path.rhos[t]);
        for (int i = 0; i < n_samples; ++i) {
            if (!ok[i]) continue;
            pivots.push_back(1.0 - std::cos(theta_hat - std::acos(rho_samples[i][t])));
        }
        const double uq = percentile(pivots, level);
        bands.lower[t] = std::max(fit.rho_path.rhos[t] - uq, -1.0);
        bands.upper[t] = std::min(fit.rho_path.rhos[t] + uq, 1.0);
    }
    return bands;
}

}  // namespace circdiff::stochcorr
