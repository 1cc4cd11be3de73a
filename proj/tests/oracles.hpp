// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles, deliberately independent of the library implementation
// paths they are used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Bessel J0 by the plain ascending series in extended precision. Trustworthy
// to ~1e-15 absolute for |x| <= 20; used as the independent reference in the
// series regime and across the implementation's regime switch.
inline long double bessel_j0_series(long double x)
{
    const long double q = x * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
        if (fabsl(term) < 1e-30L * (fabsl(sum) + 1e-10L))
            break;
    }
    return sum;
}

// Bisection root finder.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200)
{
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Pascal-triangle binomials (reference for the library's table).
inline std::vector<std::vector<std::uint64_t>> pascal_triangle(int n_max)
{
    std::vector<std::vector<std::uint64_t>> c(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        c[n].assign(n + 1, 1);
        for (int k = 1; k < n; ++k)
            c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
    }
    return c;
}

// ---------------------------------------------------------------------------
// j-th derivative by central differences on a uniform stencil with
// Richardson extrapolation (step halving, error order h^2 -> h^8). Evaluated
// in long double to keep the difference roundoff below the 1e-6 targets.
inline double fd_derivative(const std::function<double(double)>& f, double x, int order,
                            double h0)
{
    if (order == 0)
        return f(x);
    const int levels = 4;
    std::vector<long double> d(levels);
    for (int lvl = 0; lvl < levels; ++lvl) {
        const long double h = static_cast<long double>(h0) / (1 << lvl);
        // central difference: sum_i (-1)^i C(order,i) f(x + (order/2 - i) h)
        long double acc = 0.0L;
        long double coeff = 1.0L;
        for (int i = 0; i <= order; ++i) {
            const long double node =
                static_cast<long double>(x) + (order / 2.0L - i) * h;
            acc += coeff * static_cast<long double>(f(static_cast<double>(node)));
            coeff *= -static_cast<long double>(order - i) / (i + 1);
        }
        d[lvl] = acc / powl(h, order);
    }
    // Richardson: error terms go as h^2, h^4, ...
    for (int round = 1; round < levels; ++round) {
        const long double factor = powl(4.0L, round);
        for (int lvl = 0; lvl + round < levels; ++lvl)
            d[lvl] = (factor * d[lvl + 1] - d[lvl]) / (factor - 1.0L);
    }
    return static_cast<double>(d[0]);
}

// ---------------------------------------------------------------------------
// Adaptive Simpson integration (independent of the library's Gauss-Kronrod).
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb)
{
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) < 15.0 * tol)
        return left + right + err / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

inline double integrate_simpson(const std::function<double(double)>& f, double a,
                                double b, double tol, int max_depth = 48)
{
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    return detail::adapt(f, a, b, fa, fm, fb, detail::simpson(f, a, b, fa, fm, fb), tol,
                         max_depth);
}

// ---------------------------------------------------------------------------
// Regularised lower incomplete gamma P(a, x): series for x < a + 1,
// continued fraction otherwise. Used for Gamma CDFs in KS tests.
inline double gamma_p(double a, double x)
{
    if (x < 0.0 || a <= 0.0)
        throw std::domain_error("gamma_p: bad arguments");
    if (x == 0.0)
        return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16)
                break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov machinery. The p-value uses the asymptotic Kolmogorov
// distribution, adequate at the sample sizes used here (>= 1e4).
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

inline double ks_pvalue(double d, double n_effective)
{
    const double x = std::sqrt(n_effective) * d;
    if (x < 0.2)
        return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-18)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline double ks_test_pvalue(std::vector<double> samples,
                             const std::function<double(double)>& cdf)
{
    const double n = static_cast<double>(samples.size());
    return ks_pvalue(ks_statistic(std::move(samples), cdf), n);
}

inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size()));
    }
    const double ne = static_cast<double>(a.size()) * b.size() /
                      static_cast<double>(a.size() + b.size());
    return ks_pvalue(d, ne);
}

// Pearson correlation.
inline double correlation(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace oracle
