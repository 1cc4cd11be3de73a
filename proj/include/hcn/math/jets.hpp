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

#include <array>
#include <cmath>
#include <stdexcept>

namespace hcn::math {

/// Maximum supported truncation order. Keeps every jet a small fixed-size
/// value type and covers M - K up to 32 antennas of excess.
inline constexpr int kMaxJetOrder = 32;

namespace detail {
inline const std::array<double, kMaxJetOrder + 1>& factorials()
{
    struct Table {
        std::array<double, kMaxJetOrder + 1> f{};
        Table()
        {
            f[0] = 1.0;
            for (int i = 1; i <= kMaxJetOrder; ++i)
                f[i] = f[i - 1] * i;
        }
    };
    static const Table t;
    return t.f;
}
} // namespace detail

/// Truncated Taylor expansion of a scalar function about a fixed point:
/// coeff(j) = f^(j)(s0) / j!. Propagating these through arithmetic gives
/// exact higher-order derivatives with no step-size tuning.
class TaylorJet {
public:
    explicit TaylorJet(int order) : order_(order)
    {
        if (order < 0 || order > kMaxJetOrder)
            throw std::invalid_argument("TaylorJet: order must be in [0, 32]");
    }

    /// Jet of the constant function.
    static TaylorJet constant(double value, int order)
    {
        TaylorJet j(order);
        j.c_[0] = value;
        return j;
    }

    /// Jet of the identity function s -> s at the point s0.
    static TaylorJet variable(double s0, int order)
    {
        TaylorJet j(order);
        j.c_[0] = s0;
        if (order >= 1)
            j.c_[1] = 1.0;
        return j;
    }

    int order() const { return order_; }
    double coeff(int j) const { return c_[static_cast<std::size_t>(j)]; }
    double& coeff(int j) { return c_[static_cast<std::size_t>(j)]; }

    /// Function value at the expansion point.
    double value() const { return c_[0]; }

    /// The reconstructed derivative f^(j)(s0) = coeff(j) * j!.
    double derivative(int j) const
    {
        if (j < 0 || j > order_)
            throw std::invalid_argument("TaylorJet::derivative: order out of range");
        return c_[static_cast<std::size_t>(j)] * detail::factorials()[j];
    }

private:
    int order_;
    std::array<double, kMaxJetOrder + 1> c_{};
};

/// Cauchy product of two jets about the same point and of equal order.
inline TaylorJet jet_multiply(const TaylorJet& a, const TaylorJet& b)
{
    if (a.order() != b.order())
        throw std::invalid_argument("jet_multiply: mismatched orders");
    TaylorJet out(a.order());
    for (int j = 0; j <= a.order(); ++j) {
        double acc = 0.0;
        for (int m = 0; m <= j; ++m)
            acc += a.coeff(m) * b.coeff(j - m);
        out.coeff(j) = acc;
    }
    return out;
}

/// exp of a jet by the standard truncated-series recurrence
/// h_i = (1/i) sum_{j=1..i} j g_j h_{i-j}, h_0 = exp(g_0).
inline TaylorJet jet_exp(const TaylorJet& g)
{
    TaylorJet h(g.order());
    h.coeff(0) = std::exp(g.coeff(0));
    for (int i = 1; i <= g.order(); ++i) {
        double acc = 0.0;
        for (int j = 1; j <= i; ++j)
            acc += j * g.coeff(j) * h.coeff(i - j);
        h.coeff(i) = acc / i;
    }
    return h;
}

/// Jet of f(s) = (1 + c s)^(-n) at s0, from the closed-form derivatives
/// f^(j)(s0) = (-c)^j n (n+1) ... (n+j-1) (1 + c s0)^(-n-j).
inline TaylorJet jet_of_gamma_laplace(double c, int n, double s0, int order)
{
    if (!(n > 0))
        throw std::domain_error("jet_of_gamma_laplace: shape n must be positive");
    const double base = 1.0 + c * s0;
    if (!(base > 0.0))
        throw std::domain_error("jet_of_gamma_laplace: need 1 + c*s0 > 0");
    TaylorJet j(order);
    j.coeff(0) = std::pow(base, -static_cast<double>(n));
    for (int k = 1; k <= order; ++k)
        j.coeff(k) = j.coeff(k - 1) * (-c) * (n + k - 1) / (base * k);
    return j;
}

/// Jet of the power function g(s) = coef * s^exponent at s0 > 0.
inline TaylorJet jet_of_power(double coef, double exponent, double s0, int order)
{
    if (!(s0 > 0.0))
        throw std::domain_error("jet_of_power: expansion point must be positive");
    TaylorJet j(order);
    j.coeff(0) = coef * std::pow(s0, exponent);
    for (int k = 1; k <= order; ++k)
        j.coeff(k) = j.coeff(k - 1) * (exponent - (k - 1)) / (s0 * k);
    return j;
}

/// Jet of f(s) = exp(-coef * s^exponent) at s0 > 0, by composing the power
/// jet with the truncated-series exponential. The function is not smooth at
/// s = 0 for fractional exponents, hence the strict positivity requirement.
inline TaylorJet jet_of_stretched_exp(double coef, double exponent, double s0, int order)
{
    if (coef < 0.0)
        throw std::domain_error("jet_of_stretched_exp: coef must be nonnegative");
    if (!(exponent > 0.0) || exponent > 1.0)
        throw std::domain_error("jet_of_stretched_exp: exponent must lie in (0, 1]");
    if (!(s0 > 0.0))
        throw std::domain_error("jet_of_stretched_exp: s0 must be positive");
    return jet_exp(jet_of_power(-coef, exponent, s0, order));
}

} // namespace hcn::math
