#include "circdiff/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace circdiff {
namespace {

constexpr double kSeriesCutoff = 50.0;
constexpr int kAsymptoticTerms = 12;

void check_kappa(double kappa, const char* who) {
    if (!(kappa >= 0.0)) {
        throw std::invalid_argument(std::string(who) + ": kappa must be >= 0");
    }
}

// Power series I_nu for nu in {0,1}; safe for kappa < ~700 (we stay < 50).
double series_i(int nu, double kappa) {
    const double x2 = kappa * kappa / 4.0;
    double term = (nu == 0) ? 1.0 : kappa / 2.0;
    double sum = term;
    for (int m = 1; m < 1000; ++m) {
        term *= x2 / (static_cast<double>(m) * (m + nu));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// Asymptotic tail sum_{j>=0} (-1)^j a_j(nu)/kappa^j with
// a_j(nu) = prod_{i=1..j} (4 nu^2 - (2i-1)^2) / (j! 8^j).
double asymptotic_tail(int nu, double kappa) {
    const double mu4 = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= kAsymptoticTerms; ++j) {
        const double odd = 2.0 * j - 1.0;
        term *= -(mu4 - odd * odd) / (8.0 * j * kappa);
        sum += term;
    }
    return sum;
}

}  // namespace

double log_bessel_i0(double kappa) {
    check_kappa(kappa, "log_bessel_i0");
    if (kappa == 0.0) return 0.0;
    if (kappa < kSeriesCutoff) {
        return std::log(series_i(0, kappa));
    }
    return kappa - 0.5 * std::log(2.0 * M_PI * kappa) + std::log(asymptotic_tail(0, kappa));
}

double bessel_ratio(double kappa) {
    check_kappa(kappa, "bessel_ratio");
    if (kappa == 0.0) return 0.0;
    if (kappa < kSeriesCutoff) {
        return series_i(1, kappa) / series_i(0, kappa);
    }
    return asymptotic_tail(1, kappa) / asymptotic_tail(0, kappa);
}

}  // namespace circdiff
