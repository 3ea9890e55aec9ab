#ifndef CIRCDIFF_RNG_HPP
#define CIRCDIFF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace circdiff {

/// Mixes a master seed with a stream index into an independent stream seed
/// (splitmix64 finalizer). Used to separate e.g. the angle driver from the
/// price drivers inside one simulation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Standard-normal generator with a pinned algorithm: mt19937_64 driving the
/// trigonometric Box-Muller transform on 53-bit uniforms. Avoids
/// std::normal_distribution, whose output is implementation-defined.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1], u2 in [0,1)
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace circdiff

#endif  // CIRCDIFF_RNG_HPP
