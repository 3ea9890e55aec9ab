#ifndef CIRCDIFF_BESSEL_HPP
#define CIRCDIFF_BESSEL_HPP

namespace circdiff {

/// log I0(kappa) for kappa >= 0, relative error <= 1e-12.
/// Log-scale evaluation: no overflow up to kappa = 1e6 and beyond.
/// Power series below kappa = 50, asymptotic expansion above.
double log_bessel_i0(double kappa);

/// I1(kappa)/I0(kappa) for kappa >= 0; in [0, 1), strictly increasing,
/// relative error <= 1e-10.
double bessel_ratio(double kappa);

}  // namespace circdiff

#endif  // CIRCDIFF_BESSEL_HPP
