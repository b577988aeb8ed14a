#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "rcindex/errors.hpp"

namespace rcindex {

// splitmix64, used to derive independent per-chain seeds from one user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic draw source. mt19937_64 has a standardized bit stream and
// every transform below is coded out explicitly, so a (seed, spec) pair
// yields byte-identical draws on any conforming toolchain. The std::
// distribution classes are implementation-defined and would break that.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // uniform on (0, 1], safe under log()
    double uniform_pos() {
        return 1.0 - uniform();
    }

    // Box-Muller with the companion value cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Marsaglia-Tsang Gamma(shape, rate 1); shape < 1 via the boost step.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw numeric_error("gamma shape must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // sigma2 ~ InvGamma(shape, scale)  <=>  1/sigma2 ~ Gamma(shape, rate=scale)
    double inv_gamma(double shape, double scale) {
        return scale / gamma(shape);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline std::uint64_t chain_seed(std::uint64_t seed, unsigned chain_index) {
    std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (chain_index + 1);
    return splitmix64(s);
}

}  // namespace rcindex
