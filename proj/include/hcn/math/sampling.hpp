// SPDX-License-Identifier: Apache-2.0
//
// hcn -- coverage and rate analysis for multi-antenna cellular downlinks with
// residual transceiver hardware impairments, pilot contamination and channel
// aging over Poisson-distributed base stations.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "hcn/math/special.hpp"

namespace hcn::math {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// A seeded random stream. Substreams are derived from a master seed and a
/// counter, so parallel Monte Carlo runs are independent of how drops are
/// scheduled across workers. All derived draws (normal, gamma, Poisson) are
/// built from the mt19937_64 output alone, keeping sequences reproducible
/// for a fixed seed.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Counter-derived substream: same (master, index) pair, same stream.
    static RandomStream substream(std::uint64_t master_seed, std::uint64_t index)
    {
        std::uint64_t s = master_seed ^ 0x6A09E667F3BCC909ULL;
        detail::splitmix64(s);
        s += index * 0x9E3779B97F4A7C15ULL;
        std::uint64_t derived = detail::splitmix64(s);
        derived ^= detail::splitmix64(s);
        return RandomStream(derived);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe under log().
    double uniform_pos()
    {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller, one spare cached.
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1).
    std::complex<double> cgauss()
    {
        return {normal() / 1.4142135623730950488, normal() / 1.4142135623730950488};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// One Gamma(shape, scale) draw. Marsaglia-Tsang squeeze/rejection for
/// shape >= 1, with the power-of-uniform boost for shape < 1.
inline double sample_gamma(double shape, double scale, RandomStream& rng)
{
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::domain_error("sample_gamma: shape and scale must be positive");

    if (shape < 1.0) {
        const double u = rng.uniform_pos();
        return sample_gamma(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
    }

    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_pos();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v * scale;
    }
}

/// One Poisson(mean) draw. Multiplication method for small means, PTRS
/// (transformed rejection) for large ones.
inline std::uint64_t sample_poisson(double mean, RandomStream& rng)
{
    if (mean < 0.0 || !std::isfinite(mean))
        throw std::domain_error("sample_poisson: mean must be finite and nonnegative");
    if (mean == 0.0)
        return 0;

    if (mean < 30.0) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= rng.uniform();
        } while (p > limit);
        return k - 1;
    }

    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            -mean + kf * log_mean - ln_gamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

} // namespace hcn::math
