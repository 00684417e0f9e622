#pragma once

#include "wptlab/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

namespace wptlab {

/// Seeded random stream with a bit-reproducible output sequence.
///
/// The raw generator is std::mt19937_64, whose output sequence is pinned by
/// the standard. The uniform and Gaussian mappings are done here by hand
/// (53-bit mantissa scaling and Box-Muller) because the standard library
/// distribution classes are allowed to differ between implementations.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate.
    double gaussian()
    {
        if (cached_) {
            const double z = *cached_;
            cached_.reset();
            return z;
        }
        double u1 = uniform();
        while (u1 == 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        cached_ = radius * std::sin(angle);
        return radius * std::cos(angle);
    }

    /// Circularly symmetric complex normal with unit total variance
    /// (each component has variance 1/2).
    Complex complex_gaussian()
    {
        const double re = gaussian();
        const double im = gaussian();
        return Complex{re, im} * 0.70710678118654752440;
    }

    /// Vector of independent complex_gaussian() draws.
    CVector complex_gaussian_vector(std::size_t n)
    {
        CVector v(n);
        for (Complex& z : v)
            z = complex_gaussian();
        return v;
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> cached_;
};

} // namespace wptlab
