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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace hcn::math {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    const double fc = f(center);
    fv[14] = fc;
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(center - half * kXgk[i]);
        fv[7 + i] = f(center + half * kXgk[i]);
    }

    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    double resabs = std::fabs(resk);
    for (int i = 0; i < 7; ++i) {
        const double s = fv[i] + fv[7 + i];
        resk += kWgk[i] * s;
        resabs += kWgk[i] * (std::fabs(fv[i]) + std::fabs(fv[7 + i]));
        if (i % 2 == 1)
            resg += kWg[i / 2] * s;
    }

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::fabs(fv[i] - reskh) + std::fabs(fv[7 + i] - reskh));

    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(err, eps50 * resabs);

    return {a, b, resk * half, err};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over the finite
/// interval [a, b]: the segment with the largest error estimate is bisected
/// until the total estimated error meets max(abs_tol, rel_tol*|I|) or the
/// segment budget runs out. Endpoints are never evaluated.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                              double rel_tol = 0.0, int max_segments = 512)
{
    if (!(b > a))
        return {0.0, 0.0, true, 0};

    QuadResult res;
    std::priority_queue<detail::Segment> heap;
    detail::Segment whole = detail::gk15(f, a, b);
    res.evaluations = 15;
    double total_val = whole.value;
    double total_err = whole.error;
    heap.push(whole);

    int segments = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::fabs(total_val)) &&
           segments < max_segments) {
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Segment left = detail::gk15(f, worst.a, mid);
        detail::Segment right = detail::gk15(f, mid, worst.b);
        res.evaluations += 30;
        total_val += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
    }

    res.value = total_val;
    res.abs_error = total_err;
    res.converged = total_err <= std::max(abs_tol, rel_tol * std::fabs(total_val));
    return res;
}

/// Integral of f over [a, inf) for integrands that eventually decay:
/// adaptive integration over geometrically growing windows, stopping once a
/// window contributes less than a small fraction of the tolerance.
template <class F>
QuadResult integrate_to_infinity(const F& f, double a, double abs_tol,
                                 double first_window = 1.0, int max_windows = 64)
{
    QuadResult total;
    total.converged = true;
    double lo = a;
    double width = first_window;
    for (int w = 0; w < max_windows; ++w) {
        const QuadResult part = integrate_adaptive(f, lo, lo + width, abs_tol * 0.25);
        total.value += part.value;
        total.abs_error += part.abs_error;
        total.evaluations += part.evaluations;
        total.converged = total.converged && part.converged;
        if (std::fabs(part.value) < 0.02 * abs_tol && w > 0)
            return total;
        lo += width;
        width *= 2.0;
    }
    total.converged = false;
    return total;
}

} // namespace hcn::math
