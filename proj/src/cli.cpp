#include "circdiff/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "circdiff/angle.hpp"
#include "circdiff/densities.hpp"
#include "circdiff/errors.hpp"
#include "circdiff/estimation.hpp"
#include "circdiff/io.hpp"
#include "circdiff/parallel.hpp"
#include "circdiff/pde.hpp"
#include "circdiff/rng.hpp"
#include "circdiff/stochcorr.hpp"

namespace circdiff::cli {
namespace {

using estimation::ProcessKind;

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

double require_positive(const json& j, const std::string& key, double fallback) {
    const double v = get_or<double>(j, key, fallback);
    if (!(v > 0.0)) throw ConfigError("config key '" + key + "' must be positive");
    return v;
}

ProcessKind parse_process(const std::string& name) {
    if (name == "cbm" || name == "circular-brownian" || name == "circular_brownian") {
        return ProcessKind::circular_brownian;
    }
    if (name == "vmp" || name == "von-mises" || name == "von_mises") {
        return ProcessKind::von_mises;
    }
    throw ConfigError("unknown process '" + name + "' (expected cbm or von_mises)");
}

std::string process_name(ProcessKind kind) {
    return kind == ProcessKind::circular_brownian ? "cbm" : "von_mises";
}

void write_json_output(const json& result, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << result.dump(2) << "\n";
        return;
    }
    std::ofstream out(output);
    if (!out) throw DataError(output + ": cannot open for writing");
    out << result.dump(2) << "\n";
}

// caption sigma for the paper's four kappa labels; 1.0 otherwise
double default_sigma_for_kappa(double kappa) {
    if (kappa == 0.5 || kappa == 2.0 || kappa == 4.0) return 2.0;
    return 1.0;
}

double percentile_sorted(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double rank = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= v.size()) return v.back();
    const double frac = rank - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

}  // namespace

void run_simulate(const json& config) {
    const auto kind = parse_process(get_or<std::string>(config, "process", "cbm"));
    const auto output = get_or<std::string>(config, "output", "");
    if (output.empty()) throw ConfigError("simulate: 'output' is required");
    const auto seed = get_or<std::uint64_t>(config, "seed", 1);
    const int replications = get_or<int>(config, "replications", 0);

    if (replications == 0) {
        // single-path mode
        const auto n = get_or<Eigen::Index>(config, "n", 1000);
        const double dt = require_positive(config, "dt", 0.005);
        const double theta0 = get_or<double>(config, "theta0", 0.0);
        if (n < 2) throw ConfigError("simulate: need n >= 2");
        AngularPath path;
        if (kind == ProcessKind::circular_brownian) {
            path = simulate_cbm({require_positive(config, "sigma", 1.0)}, theta0, n, dt, seed);
        } else {
            const VonMisesParams params{Angle(get_or<double>(config, "mu", 0.0)),
                                        require_positive(config, "lambda", 1.0),
                                        require_positive(config, "sigma", 1.0)};
            path = simulate_vmp(params, theta0, n, dt, seed);
        }
        io::write_csv(output, {"time", "angle"}, {path.times, path.angles});
        return;
    }

    // replication-study mode; one row per cell
    std::vector<estimation::StudyConfig> cells;
    const auto cell_from = [&](const json& j) {
        estimation::StudyConfig c;
        c.process = kind;
        c.mu = get_or<double>(j, "mu", get_or<double>(config, "mu", 0.0));
        c.lambda = get_or<double>(j, "lambda", get_or<double>(config, "lambda", 1.0));
        c.sigma = get_or<double>(j, "sigma", get_or<double>(config, "sigma", 1.0));
        c.n = get_or<Eigen::Index>(j, "n", get_or<Eigen::Index>(config, "n", 1000));
        c.dt = get_or<double>(j, "dt", get_or<double>(config, "dt", 0.005));
        c.replications = replications;
        c.seed = seed;
        c.theta0 = get_or<double>(j, "theta0", get_or<double>(config, "theta0", 0.0));
        c.workers = get_or<int>(config, "workers", 0);
        if (!(c.sigma > 0.0) || !(c.dt > 0.0) || c.n < 2) {
            throw ConfigError("simulate: invalid study cell (sigma, dt must be > 0, n >= 2)");
        }
        return c;
    };
    if (config.contains("cells")) {
        for (const auto& j : config.at("cells")) cells.push_back(cell_from(j));
    } else {
        cells.push_back(cell_from(config));
    }

    std::vector<estimation::ReplicationReport> reports(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) reports[i] = replicate_study(cells[i]);

    const auto rows = static_cast<Eigen::Index>(cells.size());
    auto col = [&](auto getter) {
        Eigen::ArrayXd c(rows);
        for (Eigen::Index i = 0; i < rows; ++i) c[i] = getter(cells[i], reports[i]);
        return c;
    };
    std::vector<std::string> header = {"sigma", "n", "dt", "replications", "failures",
                                       "E[sigma-sigma_hat]", "SD[sigma-sigma_hat]"};
    std::vector<Eigen::ArrayXd> cols = {
        col([](const auto& c, const auto&) { return c.sigma; }),
        col([](const auto& c, const auto&) { return static_cast<double>(c.n); }),
        col([](const auto& c, const auto&) { return c.dt; }),
        col([](const auto& c, const auto&) { return static_cast<double>(c.replications); }),
        col([](const auto&, const auto& r) { return static_cast<double>(r.failures); }),
        col([](const auto&, const auto& r) { return r.sigma_bias; }),
        col([](const auto&, const auto& r) { return r.sigma_sd; })};
    if (kind == ProcessKind::von_mises) {
        header.insert(header.begin(), {"mu", "lambda"});
        cols.insert(cols.begin(),
                    {col([](const auto& c, const auto&) { return c.mu; }),
                     col([](const auto& c, const auto&) { return c.lambda; })});
        header.insert(header.end(), {"E[lambda-lambda_hat]", "SD[lambda-lambda_hat]",
                                     "bias_mu_hat", "concentration_mu_hat"});
        cols.push_back(col([](const auto&, const auto& r) { return r.lambda_bias.value(); }));
        cols.push_back(col([](const auto&, const auto& r) { return r.lambda_sd.value(); }));
        cols.push_back(col([](const auto&, const auto& r) { return r.mu_bias.value(); }));
        cols.push_back(col([](const auto&, const auto& r) { return r.mu_concentration.value(); }));
    }
    io::write_csv(output, header, cols);
}

void run_validate_tpd(const json& config) {
    const auto output = get_or<std::string>(config, "output", "hellinger.csv");
    const auto k = get_or<Eigen::Index>(config, "k", 3000);
    const auto m = get_or<Eigen::Index>(config, "m", 20000);
    const double theta0 = get_or<double>(config, "theta0", 0.0);
    if (k < 16 || m < 2) throw ConfigError("validate-tpd: need k >= 16, m >= 2");
    if (k < 500) {
        std::cerr << "warning: coarse grid (k = " << k
                  << "); Hellinger values will carry discretization error\n";
    }
    std::vector<double> mus = get_or<std::vector<double>>(
        config, "mus",
        {M_PI / 4, -M_PI / 4, M_PI / 3, -M_PI / 3, M_PI / 2, -M_PI / 2});
    std::vector<double> times =
        get_or<std::vector<double>>(config, "times", {1e-4, 1e-3, 1e-2, 1e-1});

    // parameter sets: explicit (lambda, sigma) pairs, or kappa values with
    // sigma chosen per kappa (lambda = kappa sigma^2 / 2)
    std::vector<std::pair<double, double>> lambda_sigma;
    if (config.contains("pairs")) {
        for (const auto& p : config.at("pairs")) {
            if (!p.is_array() || p.size() != 2) {
                throw ConfigError("validate-tpd: each entry of 'pairs' is [lambda, sigma]");
            }
            lambda_sigma.emplace_back(p[0].get<double>(), p[1].get<double>());
            if (!(lambda_sigma.back().first > 0.0) || !(lambda_sigma.back().second > 0.0)) {
                throw ConfigError("validate-tpd: lambda and sigma must be > 0");
            }
        }
    } else {
        const auto kappas =
            get_or<std::vector<double>>(config, "kappas", {0.5, 1.0, 2.0, 4.0});
        std::vector<double> sigmas = get_or<std::vector<double>>(config, "sigmas", {});
        if (!sigmas.empty() && sigmas.size() != kappas.size()) {
            throw ConfigError("validate-tpd: 'sigmas' must align with 'kappas'");
        }
        for (std::size_t i = 0; i < kappas.size(); ++i) {
            const double kappa = kappas[i];
            if (!(kappa > 0.0)) throw ConfigError("validate-tpd: kappa must be > 0");
            const double sigma = sigmas.empty() ? default_sigma_for_kappa(kappa) : sigmas[i];
            lambda_sigma.emplace_back(kappa * sigma * sigma / 2.0, sigma);
        }
    }

    struct Cell {
        VonMisesParams params;
    };
    std::vector<Cell> grid;
    for (const auto& [lambda, sigma] : lambda_sigma) {
        for (double mu : mus) {
            grid.push_back({VonMisesParams{Angle(mu), lambda, sigma}});
        }
    }
    std::vector<std::vector<pde::TpdValidationRow>> results(grid.size());
    parallel_for(static_cast<int>(grid.size()), get_or<int>(config, "workers", 0), [&](int i) {
        results[i] = pde::validate_tpd({grid[i].params}, theta0, times, k, m);
    });

    Eigen::Index rows = 0;
    for (const auto& r : results) rows += static_cast<Eigen::Index>(r.size());
    Eigen::ArrayXd ck(rows), cl(rows), cs(rows), cm(rows), ct(rows), ch(rows);
    Eigen::Index at = 0;
    double max_h = 0.0;
    for (const auto& cell_rows : results) {
        for (const auto& r : cell_rows) {
            ck[at] = r.kappa;
            cl[at] = r.lambda;
            cs[at] = r.sigma;
            cm[at] = r.mu;
            ct[at] = r.t;
            ch[at] = r.hellinger;
            max_h = std::max(max_h, r.hellinger);
            ++at;
        }
    }
    io::write_csv(output, {"kappa", "lambda", "sigma", "mu", "t", "hellinger"},
                  {ck, cl, cs, cm, ct, ch});
    std::cout << "validate-tpd: " << rows << " cells, max hellinger = " << max_h << "\n";
}

namespace {

// Euler-Maruyama resimulation on an arbitrary (strictly increasing) time grid
Eigen::ArrayXd resimulate_on_times(const Eigen::ArrayXd& times, double theta0, bool von_mises,
                                   double lambda, double mu, double sigma, std::uint64_t seed) {
    NormalSampler rng(seed);
    Eigen::ArrayXd angles(times.size());
    double x = wrap(theta0);
    angles[0] = x;
    for (Eigen::Index i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        const double drift = von_mises ? -lambda * std::sin(x - mu) * dt : 0.0;
        x = wrap(x + drift + sigma * std::sqrt(dt) * rng.next());
        angles[i] = x;
    }
    return angles;
}

}  // namespace

void run_fit_circular(const json& config) {
    const auto input = get_or<std::string>(config, "input", "");
    if (input.empty()) throw ConfigError("fit-circular: 'input' is required");
    const auto kind = parse_process(get_or<std::string>(config, "process", "von_mises"));
    const auto units_name = get_or<std::string>(config, "units", "radians");
    io::AngleUnits units;
    if (units_name == "radians") {
        units = io::AngleUnits::radians;
    } else if (units_name == "degrees") {
        units = io::AngleUnits::degrees;
    } else {
        throw ConfigError("fit-circular: units must be radians or degrees");
    }

    const auto series = io::read_angle_csv(input, units);
    if (series.angles.size() < 3) throw DataError("fit-circular: need at least 3 observations");

    AngularPath path;
    path.angles = series.angles;
    if (config.contains("dt")) {
        const double dt = require_positive(config, "dt", 0.0);
        path.times = dt * Eigen::ArrayXd::LinSpaced(series.angles.size(), 0.0,
                                                    static_cast<double>(series.angles.size() - 1));
    } else {
        path.times = series.times_days;  // dt inferred from timestamps, in days
    }
    path.validate();

    estimation::FitOptions fit_opts;
    fit_opts.lambda_max = get_or<double>(config, "lambda_max", 50.0);
    fit_opts.max_evals = get_or<int>(config, "max_evals", 2000);

    estimation::CircularFit fit;
    if (kind == ProcessKind::circular_brownian) {
        fit = estimation::fit_cbm(path);
    } else {
        fit = estimation::fit_vmp(path, fit_opts);
    }

    json result;
    result["schema"] = "circdiff.circular-fit.v1";
    result["process"] = process_name(kind);
    result["n_obs"] = fit.n_obs;
    result["time_unit"] = "days";
    result["sigma_hat"] = fit.sigma_hat;
    if (fit.lambda_hat) result["lambda_hat"] = *fit.lambda_hat;
    if (fit.mu_hat) result["mu_hat"] = *fit.mu_hat;
    result["loglik"] = fit.loglik;
    result["converged"] = fit.converged;

    const int n_boot = get_or<int>(config, "bootstrap", 0);
    if (n_boot > 1) {
        const double level = get_or<double>(config, "level", 0.95);
        if (!(level > 0.0 && level < 1.0)) throw ConfigError("fit-circular: bad 'level'");
        const auto seed = get_or<std::uint64_t>(config, "seed", 1);
        const int workers = get_or<int>(config, "workers", 0);
        std::vector<double> sig(n_boot), lam(n_boot), mu(n_boot);
        std::vector<char> ok(n_boot, 0);
        const bool vm = kind == ProcessKind::von_mises;
        parallel_for(n_boot, workers, [&](int i) {
            AngularPath sim;
            sim.times = path.times;
            sim.angles = resimulate_on_times(
                path.times, path.angles[0], vm, vm ? *fit.lambda_hat : 0.0,
                vm ? *fit.mu_hat : 0.0, fit.sigma_hat,
                derive_seed(seed, static_cast<std::uint64_t>(i) + 1));
            try {
                if (vm) {
                    const auto refit = estimation::fit_vmp(sim, fit_opts);
                    sig[i] = refit.sigma_hat;
                    lam[i] = *refit.lambda_hat;
                    mu[i] = *refit.mu_hat;
                } else {
                    sig[i] = estimation::fit_cbm(sim).sigma_hat;
                }
                ok[i] = 1;
            } catch (const NumericalError&) {
            } catch (const DataError&) {
            }
        });
        std::vector<double> sv, lv, uv;
        for (int i = 0; i < n_boot; ++i) {
            if (!ok[i]) continue;
            sv.push_back(sig[i]);
            if (vm) {
                lv.push_back(lam[i]);
                uv.push_back(1.0 - std::cos(*fit.mu_hat - mu[i]));
            }
        }
        if (sv.size() < 2) throw NumericalError("fit-circular: bootstrap refits failed");
        const double alpha = (1.0 - level) / 2.0;
        json boot;
        boot["n"] = n_boot;
        boot["failures"] = n_boot - static_cast<int>(sv.size());
        boot["level"] = level;
        boot["sigma"] = {percentile_sorted(sv, alpha), percentile_sorted(sv, 1.0 - alpha)};
        if (vm) {
            boot["lambda"] = {percentile_sorted(lv, alpha), percentile_sorted(lv, 1.0 - alpha)};
            // circular pivot: radius acos(1 - U_q) around mu_hat
            const double uq = percentile_sorted(uv, level);
            const double radius = std::acos(std::clamp(1.0 - uq, -1.0, 1.0));
            boot["mu"] = {*fit.mu_hat - radius, *fit.mu_hat + radius};
        }
        result["bootstrap"] = boot;
    }
    write_json_output(result, get_or<std::string>(config, "output", ""));
}

void run_fit_stochcorr(const json& config) {
    using namespace circdiff::stochcorr;
    const auto input = get_or<std::string>(config, "input", "");
    if (input.empty()) throw ConfigError("fit-stochcorr: 'input' is required");
    const auto kind_name = get_or<std::string>(config, "process", "cbm");
    const CorrKind kind = parse_process(kind_name) == ProcessKind::circular_brownian
                              ? CorrKind::circular_brownian
                              : CorrKind::von_mises;

    const auto series = io::read_price_csv(input);
    // daily financial data: one row per trading day
    const double dt = config.contains("dt") ? require_positive(config, "dt", 0.0) : 1.0 / 252.0;

    StochCorrHyper hyper;
    hyper.lambda1 = get_or<double>(config, "lambda1",
                                   kind == CorrKind::circular_brownian ? 4.0 : 10.0);
    hyper.lambda2 = kind == CorrKind::circular_brownian
                        ? 0.0
                        : get_or<double>(config, "lambda2", 20.0);

    StochCorrOptions opts;
    opts.knot_spacing = get_or<Eigen::Index>(config, "knot_spacing", 1);
    opts.max_evals = get_or<int>(config, "max_evals", 20000);
    opts.outer_rounds = get_or<int>(config, "outer_rounds", 20);
    opts.workers = get_or<int>(config, "workers", 0);

    const auto fit = fit_stochcorr(series.price1, series.price2, dt, kind, hyper, opts);
    if (fit.diagnostics.clamped_init) {
        std::cerr << "warning: correlation clamp active (initializer hit |rho| = 1 - eps); "
                     "the series are collinear\n";
    }

    json result;
    result["schema"] = "circdiff.stochcorr-fit.v1";
    result["process"] = kind_name;
    result["dt_years"] = dt;
    result["leg1"] = {{"mu", fit.leg1.mu}, {"sigma", fit.leg1.sigma}, {"s0", fit.leg1.s0}};
    result["leg2"] = {{"mu", fit.leg2.mu}, {"sigma", fit.leg2.sigma}, {"s0", fit.leg2.s0}};
    if (kind == CorrKind::circular_brownian) {
        result["corr"] = {{"kind", "cbm"}, {"sigma", fit.corr.cbm.sigma}};
    } else {
        result["corr"] = {{"kind", "von_mises"},
                          {"lambda", fit.corr.vmp.lambda},
                          {"mu", fit.corr.vmp.mu.value()},
                          {"sigma", fit.corr.vmp.sigma},
                          {"kappa", fit.corr.vmp.kappa()}};
    }
    result["hyper"] = {{"lambda1", fit.hyper.lambda1}, {"lambda2", fit.hyper.lambda2}};
    result["penalized_loglik"] = fit.penalized_loglik;
    result["diagnostics"] = {{"outer_rounds", fit.diagnostics.outer_rounds},
                             {"optimizer_evals", fit.diagnostics.optimizer_evals},
                             {"objective_trace", fit.diagnostics.objective_trace},
                             {"clamped_init", fit.diagnostics.clamped_init}};
    json rho_json = json::array();
    for (Eigen::Index i = 0; i < fit.rho_path.rhos.size(); ++i) {
        rho_json.push_back({{"t", series.timestamps[static_cast<std::size_t>(i)]},
                            {"rho", fit.rho_path.rhos[i]}});
    }
    result["rho"] = rho_json;

    const int n_boot = get_or<int>(config, "bootstrap", 0);
    if (n_boot > 1) {
        const double level = get_or<double>(config, "level", 0.95);
        const auto seed = get_or<std::uint64_t>(config, "seed", 1);
        const auto bands = bootstrap_rho_bands(fit, n_boot, level, seed, opts);
        result["bootstrap"] = {{"n", n_boot},
                               {"level", level},
                               {"refit_failures", bands.refit_failures}};
        const auto bands_output = get_or<std::string>(config, "bands_output", "bands.csv");
        io::write_csv(bands_output, {"time", "rho_hat", "lower", "upper"}, series.timestamps,
                      {fit.rho_path.rhos, bands.lower, bands.upper});
    }
    write_json_output(result, get_or<std::string>(config, "output", ""));
}

namespace {

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"circular-diffusion simulation, estimation and stochastic correlation"};
    app.require_subcommand(1);

    struct Common {
        std::string config_path, output, input, process, units;
        std::uint64_t seed = 0;
        int workers = -1, bootstrap = -1;
        double dt = 0.0, level = 0.0, lambda1 = -1.0, lambda2 = -1.0;
        Eigen::Index knots = 0;
    } common;

    const auto add_common = [&](CLI::App* sub, bool with_input) {
        sub->add_option("--config", common.config_path, "JSON config file");
        sub->add_option("--seed", common.seed, "master random seed");
        sub->add_option("--workers", common.workers, "parallel workers (0: all cores)");
        sub->add_option("-o,--output", common.output, "output file");
        if (with_input) sub->add_option("-i,--input", common.input, "input CSV");
    };

    auto* sim = app.add_subcommand("simulate", "simulate circular diffusion paths / studies");
    add_common(sim, false);
    sim->add_option("--process", common.process, "cbm or von_mises");
    sim->add_option("--dt", common.dt, "time step");

    auto* val = app.add_subcommand("validate-tpd",
                                   "Hellinger validation of the analytic TPD vs the PDE");
    add_common(val, false);

    auto* fitc = app.add_subcommand("fit-circular", "fit a circular diffusion to an angle series");
    add_common(fitc, true);
    fitc->add_option("--process", common.process, "cbm or von_mises");
    fitc->add_option("--units", common.units, "radians or degrees");
    fitc->add_option("--dt", common.dt, "override the observation step (days)");
    fitc->add_option("--bootstrap", common.bootstrap, "parametric bootstrap samples");
    fitc->add_option("--level", common.level, "confidence level (default 0.95)");

    auto* fits = app.add_subcommand("fit-stochcorr",
                                    "fit the stochastic correlation model to a price pair");
    add_common(fits, true);
    fits->add_option("--process", common.process, "correlation process: cbm or von_mises");
    fits->add_option("--dt", common.dt, "years per observation (default 1/252)");
    fits->add_option("--bootstrap", common.bootstrap, "bootstrap samples for rho bands");
    fits->add_option("--level", common.level, "confidence level (default 0.95)");
    fits->add_option("--lambda1", common.lambda1, "roughness penalty weight");
    fits->add_option("--lambda2", common.lambda2, "kappa penalty weight (von Mises)");
    fits->add_option("--knots", common.knots, "rho knot spacing (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json config = load_config_file(common.config_path);
        CLI::App* sub = app.get_subcommands().front();
        const auto merge = [&](const char* flag, const char* key, auto value) {
            const auto* opt = sub->get_option_no_throw(flag);
            if (opt && opt->count() > 0) config[key] = value;
        };
        merge("--seed", "seed", common.seed);
        merge("--workers", "workers", common.workers);
        merge("--output", "output", common.output);
        merge("--input", "input", common.input);
        merge("--process", "process", common.process);
        merge("--units", "units", common.units);
        merge("--dt", "dt", common.dt);
        merge("--bootstrap", "bootstrap", common.bootstrap);
        merge("--level", "level", common.level);
        merge("--lambda1", "lambda1", common.lambda1);
        merge("--lambda2", "lambda2", common.lambda2);
        merge("--knots", "knot_spacing", common.knots);

        if (sub == sim) {
            run_simulate(config);
        } else if (sub == val) {
            run_validate_tpd(config);
        } else if (sub == fitc) {
            run_fit_circular(config);
        } else {
            run_fit_stochcorr(config);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace circdiff::cli
