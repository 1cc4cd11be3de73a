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
#include <limits>
#include <stdexcept>

namespace hcn::math {

/// Zeroth-order Bessel function of the first kind.
///
/// Two regimes: the ascending power series below |x| = 14 and the Hankel
/// asymptotic expansion beyond, both accumulated in extended precision so
/// that the absolute error stays under 1e-12 across |x| <= 100. The series
/// suffers ~1e4 cancellation near the regime boundary, which the 64-bit
/// significand absorbs; the asymptotic truncation floor at x = 14 is ~7e-13.
inline double bessel_j0(double x)
{
    if (!std::isfinite(x))
        throw std::domain_error("bessel_j0: argument must be finite");

    const long double ax = fabsl(static_cast<long double>(x));

    if (ax < 14.0L) {
        // J0(x) = sum_k (-q)^k / (k!)^2,  q = (x/2)^2
        const long double q = ax * ax / 4.0L;
        long double term = 1.0L;
        long double sum = 1.0L;
        for (int k = 1; k < 90; ++k) {
            term *= -q / (static_cast<long double>(k) * k);
            sum += term;
            if (fabsl(term) < 1e-24L * fabsl(sum) + 1e-30L)
                break;
        }
        return static_cast<double>(sum);
    }

    // J0(x) = sqrt(2/(pi x)) [P cos(chi) + Q sin(chi)],  chi = x - pi/4,
    // with P, Q the even/odd halves of the asymptotic series
    //   a_m = a_{m-1} (2m-1)^2 / (8 m x),
    // summed until the terms stop decreasing.
    const long double pi = 3.14159265358979323846264L;
    const long double chi = ax - pi / 4.0L;
    long double a = 1.0L;
    long double p = 1.0L;
    long double q = 0.0L;
    long double prev = std::numeric_limits<long double>::max();
    for (int m = 1; m < 64; ++m) {
        a *= static_cast<long double>(2 * m - 1) * (2 * m - 1) / (8.0L * m * ax);
        if (a >= prev)
            break;
        prev = a;
        switch (m & 3) {
            case 0: p += a; break;
            case 1: q += a; break;
            case 2: p -= a; break;
            case 3: q -= a; break;
        }
        if (a < 1e-22L)
            break;
    }
    const long double val =
        sqrtl(2.0L / (pi * ax)) * (p * cosl(chi) + q * sinl(chi));
    return static_cast<double>(val);
}

} // namespace hcn::math
