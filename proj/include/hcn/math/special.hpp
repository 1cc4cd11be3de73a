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
#include <stdexcept>

namespace hcn::math {

/// log Gamma(x) for x > 0, reentrant.
inline double ln_gamma(double x)
{
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

/// log of the Beta function, ln B(x,y) = ln G(x) + ln G(y) - ln G(x+y).
/// Defined only on the convergent domain x > 0, y > 0; divergent arguments
/// are the caller's responsibility to exclude.
inline double ln_beta(double x, double y)
{
    if (!(x > 0.0) || !(y > 0.0))
        throw std::domain_error("ln_beta: arguments must be positive");
    return ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
}

} // namespace hcn::math
