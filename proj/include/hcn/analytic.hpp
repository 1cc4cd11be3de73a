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
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hcn/channel.hpp"
#include "hcn/math/combinatorics.hpp"
#include "hcn/math/jets.hpp"
#include "hcn/math/quadrature.hpp"
#include "hcn/math/special.hpp"

namespace hcn {

/// Gamma shape used for the estimation-error term E_k: K matches the
/// column-sum construction, delta_cap matches the printed transform.
enum class ErrorShape { k_users, delta_cap };

struct AnalyticOptions {
    ErrorShape error_shape = ErrorShape::k_users;
    VarianceMode variance_mode = VarianceMode::printed;
    /// Contamination-only error variance instead of the aged one.
    bool use_aged_error = true;
    double quad_abs_tol = 1e-6;
    int max_segments = 512;
};

/// Scales and shapes of the Gamma-distributed SIR terms: desired power Z
/// (shape Delta), error E_k, transmit distortion I_eta_t (shape Delta),
/// receive distortion I_eta_r (shape M) and per-BS interference marks g_l
/// (shape K).
struct SirDecomposition {
    double scale_signal = 1.0;  ///< sigma2_hat
    double scale_error = 0.0;   ///< (1 + kt_bs) * sigma2 / delta^2
    double scale_tx = 0.0;      ///< kt_bs
    double scale_rx = 0.0;      ///< kr_ue
    int delta_cap = 1;          ///< M - K + 1
    int m_antennas = 1;
    int k_users = 1;
    int error_shape = 1;        ///< K or Delta, per ErrorShape
};

inline SirDecomposition decompose(const NetworkConfig& cfg, const ImpairmentProfile& imp,
                                  const AnalyticOptions& opts = {})
{
    if (imp.delta == 0.0)
        throw std::domain_error("decompose: delta = 0 is outside the aged-CSIT model;"
                                " use fd_ts = 0 (delta = 1) for a static channel");
    const ChannelStats st = estimate_variances(cfg, imp, opts.variance_mode);
    SirDecomposition dec;
    dec.scale_signal = st.sigma2_hat;
    const double err_var = opts.use_aged_error ? st.sigma2_aged : st.sigma2_err;
    dec.scale_error = (1.0 + imp.kt_bs) * err_var / (imp.delta * imp.delta);
    dec.scale_tx = imp.kt_bs;
    dec.scale_rx = imp.kr_ue;
    dec.delta_cap = st.delta_cap;
    dec.m_antennas = cfg.m_antennas;
    dec.k_users = cfg.k_users;
    dec.error_shape =
        opts.error_shape == ErrorShape::k_users ? cfg.k_users : st.delta_cap;
    return dec;
}

/// The interference constant C(alpha, K) of the PPP Laplace transform,
/// (2 pi lambda_B / alpha) * sum_{m=1..K} C(K,m) B(K - m + 2/alpha, m - 2/alpha).
/// The m = 0 term of the printed sum has a nonpositive Beta argument and is
/// excluded, matching the final line of the underlying derivation.
inline double interference_coefficient(double alpha, int k_users, double lambda_b)
{
    if (!(alpha > 2.0))
        throw std::domain_error("interference_coefficient: alpha must exceed 2");
    if (k_users < 1)
        throw std::domain_error("interference_coefficient: need K >= 1");
    if (!(lambda_b >= 0.0))
        throw std::domain_error("interference_coefficient: lambda_b must be nonnegative");
    const double two_over_a = 2.0 / alpha;
    double sum = 0.0;
    for (int m = 1; m <= k_users; ++m) {
        const double b = std::exp(
            math::ln_beta(k_users - m + two_over_a, m - two_over_a));
        sum += static_cast<double>(math::binomial(k_users, m)) * b;
    }
    return 2.0 * std::numbers::pi * lambda_b / alpha * sum;
}

/// Jet of L_{I_l}(s) = exp(-C s^(2/alpha)) at s > 0.
inline math::TaylorJet laplace_interference(double s, int jet_order, double coeff_c,
                                            double alpha)
{
    if (!(s > 0.0))
        throw std::domain_error("laplace_interference: s must be positive");
    if (coeff_c == 0.0)
        return math::TaylorJet::constant(1.0, jet_order);
    return math::jet_of_stretched_exp(coeff_c, 2.0 / alpha, s, jet_order);
}

/// Jet of L_{I_eta_t}(s) = (1 + kt_bs s)^(-Delta).
inline math::TaylorJet laplace_tx_distortion(double s, int jet_order,
                                             const SirDecomposition& dec)
{
    return math::jet_of_gamma_laplace(dec.scale_tx, dec.delta_cap, s, jet_order);
}

/// Jet of L_{I_eta_r}(s) = (1 + kr_ue s)^(-M).
inline math::TaylorJet laplace_rx_distortion(double s, int jet_order,
                                             const SirDecomposition& dec)
{
    return math::jet_of_gamma_laplace(dec.scale_rx, dec.m_antennas, s, jet_order);
}

/// Jet of L_{E_k}(s) = (1 + scale_error s)^(-shape), shape K by default.
inline math::TaylorJet laplace_estimation_error(double s, int jet_order,
                                                const SirDecomposition& dec)
{
    return math::jet_of_gamma_laplace(dec.scale_error, dec.error_shape, s, jet_order);
}

/// One evaluated point of the coverage upper bound.
struct CoveragePoint {
    double t_target = 1.0;   ///< SIR threshold, linear
    double bound_raw = 0.0;  ///< unclamped union-bound integral
    double bound = 0.0;      ///< min(bound_raw, 1)
    double abs_tol = 0.0;    ///< achieved quadrature error estimate
    bool converged = true;
};

namespace detail {

/// Radial-integral evaluator for the coverage bound. The distortion and
/// error transforms enter at the constant argument a = T / sigma2_hat, so
/// their derivative mix
///   S_m = sum_{u1+u2+u3=m} multinomial * L_E^(u1) L_t^(u2) L_r^(u3) (a)
/// collapses into weights
///   W_k = sum_{m=0..Delta-1-k} (-a)^m S_m / m!
/// computed once per call. Each S_m carries the sign (-1)^m, so every
/// product (-a)^m S_m is nonnegative and the assembled sums are
/// cancellation-free. Along the radius only the interference transform
/// varies; its derivatives are taken in the scaled variable s = s0(1 + t),
/// for which (-s)^k L^(k)(s) / k! = (-1)^k ctilde_k stays O(1) even where
/// s is tiny or huge.
class CoverageIntegrand {
public:
    CoverageIntegrand(double t_target, const NetworkConfig& cfg,
                      const SirDecomposition& dec, const AnalyticOptions& opts)
        : t_target_(t_target),
          alpha_(cfg.alpha),
          sigma2_hat_(dec.scale_signal),
          delta_cap_(dec.delta_cap)
    {
        if (!(t_target > 0.0))
            throw std::domain_error("coverage bound: threshold must be positive");
        const int order = delta_cap_ - 1;
        const double a = t_target_ / sigma2_hat_;

        const math::TaylorJet je = laplace_estimation_error(a, order, dec);
        const math::TaylorJet jt = laplace_tx_distortion(a, order, dec);
        const math::TaylorJet jr = laplace_rx_distortion(a, order, dec);

        std::vector<double> s_m(static_cast<std::size_t>(order) + 1, 0.0);
        for (int m = 0; m <= order; ++m) {
            double acc = 0.0;
            for (const auto& idx : math::enumerate_compositions(m))
                acc += static_cast<double>(idx.weight) * je.derivative(idx.u1) *
                       jt.derivative(idx.u2) * jr.derivative(idx.u3);
            s_m[static_cast<std::size_t>(m)] = acc;
        }

        w_k_.assign(static_cast<std::size_t>(delta_cap_), 0.0);
        for (int k = 0; k < delta_cap_; ++k) {
            double acc = 0.0;
            double neg_a_pow = 1.0;
            for (int m = 0; m + k < delta_cap_; ++m) {
                acc += neg_a_pow * s_m[static_cast<std::size_t>(m)] /
                       math::detail::factorials()[m];
                neg_a_pow *= -a;
            }
            w_k_[static_cast<std::size_t>(k)] = acc;
        }

        big_c_ = interference_coefficient(cfg.alpha, cfg.k_users, cfg.lambda_b);
        // C s^(2/alpha) is linear in v = l^2; truncate where it reaches 50
        // (integrand factor below 2e-22).
        cf_v_ = big_c_ * std::pow(t_target_ / sigma2_hat_, 2.0 / alpha_);
        v_max_ = 50.0 / cf_v_;
    }

    /// P[SIR > T | serving distance l], as a function of v = l^2.
    double operator()(double v) const
    {
        const double s = t_target_ * std::pow(v, 0.5 * alpha_) / sigma2_hat_;
        if (!(s > 0.0))
            return w_k_[0];
        const int order = delta_cap_ - 1;
        const double q = big_c_ * std::pow(s, 2.0 / alpha_);
        // jet of -q (1 + t)^(2/alpha) in the scaled variable t
        math::TaylorJet power(order);
        power.coeff(0) = -q;
        for (int j = 1; j <= order; ++j)
            power.coeff(j) = power.coeff(j - 1) * (2.0 / alpha_ - (j - 1)) / j;
        const math::TaylorJet lt = math::jet_exp(power);
        double acc = 0.0;
        double sign = 1.0;
        for (int k = 0; k < delta_cap_; ++k) {
            acc += w_k_[static_cast<std::size_t>(k)] * sign * lt.coeff(k);
            sign = -sign;
        }
        return acc;
    }

    double v_max() const { return v_max_; }

private:
    double t_target_;
    double alpha_;
    double sigma2_hat_;
    int delta_cap_;
    double big_c_ = 0.0;
    double cf_v_ = 0.0;
    double v_max_ = 0.0;
    std::vector<double> w_k_;
};

} // namespace detail

/// Upper bound on the downlink coverage probability at SIR threshold T:
/// the union-bound sum over the PPP, evaluated in polar coordinates with
/// the substitution v = l^2 flattening the measure to pi lambda_B dv.
inline CoveragePoint coverage_upper_bound(double t_target, const NetworkConfig& cfg,
                                          const ImpairmentProfile& imp,
                                          const AnalyticOptions& opts = {})
{
    const SirDecomposition dec = decompose(cfg, imp, opts);
    const detail::CoverageIntegrand integrand(t_target, cfg, dec, opts);
    const double scale = std::numbers::pi * cfg.lambda_b;
    const math::QuadResult quad =
        math::integrate_adaptive(integrand, 0.0, integrand.v_max(),
                                 opts.quad_abs_tol / scale, 0.0, opts.max_segments);
    CoveragePoint pt;
    pt.t_target = t_target;
    pt.bound_raw = scale * quad.value;
    pt.bound = std::min(pt.bound_raw, 1.0);
    pt.abs_tol = scale * quad.abs_error;
    pt.converged = quad.converged;
    return pt;
}

/// Full-SDMA (M = K) fast path: Delta = 1 collapses the derivative sums and
/// the integrand is the plain product of the four transforms.
inline CoveragePoint coverage_sdma(double t_target, const NetworkConfig& cfg,
                                   const ImpairmentProfile& imp,
                                   const AnalyticOptions& opts = {})
{
    if (cfg.m_antennas != cfg.k_users)
        throw std::invalid_argument("coverage_sdma: requires M = K");
    if (!(t_target > 0.0))
        throw std::domain_error("coverage_sdma: threshold must be positive");

    const SirDecomposition dec = decompose(cfg, imp, opts);
    const double a = t_target / dec.scale_signal;
    const double product = laplace_estimation_error(a, 0, dec).value() *
                           laplace_tx_distortion(a, 0, dec).value() *
                           laplace_rx_distortion(a, 0, dec).value();
    const double big_c = interference_coefficient(cfg.alpha, cfg.k_users, cfg.lambda_b);
    const double cf_v = big_c * std::pow(a, 2.0 / cfg.alpha);
    const double v_max = 50.0 / cf_v;
    const double alpha = cfg.alpha;
    const double sigma2 = dec.scale_signal;
    const auto f = [&](double v) {
        const double s = t_target * std::pow(v, 0.5 * alpha) / sigma2;
        return product * std::exp(-big_c * std::pow(s, 2.0 / alpha));
    };
    const double scale = std::numbers::pi * cfg.lambda_b;
    const math::QuadResult quad = math::integrate_adaptive(
        f, 0.0, v_max, opts.quad_abs_tol / scale, 0.0, opts.max_segments);

    CoveragePoint pt;
    pt.t_target = t_target;
    pt.bound_raw = scale * quad.value;
    pt.bound = std::min(pt.bound_raw, 1.0);
    pt.abs_tol = scale * quad.abs_error;
    pt.converged = quad.converged;
    return pt;
}

struct RateResult {
    double nats = 0.0;
    double abs_tol = 0.0;
    bool converged = true;
};

/// Average achievable user rate in nats per channel use: the layer integral
/// of the clamped coverage bound over thresholds e^t - 1. Below the
/// crossover t* where the raw bound exceeds one the integrand is exactly 1;
/// beyond it the bound is integrated adaptively until it falls under 1e-9.
inline RateResult average_rate(const NetworkConfig& cfg, const ImpairmentProfile& imp,
                               const AnalyticOptions& opts = {})
{
    const auto bound_at = [&](double t) {
        return coverage_upper_bound(std::expm1(t), cfg, imp, opts);
    };

    // Bracket and bisect the crossover where bound_raw = 1. The raw bound
    // diverges as T -> 0, so a crossover exists whenever the bound reaches 1.
    double t_star = 0.0;
    double lo = 1e-12;
    if (bound_at(lo).bound_raw >= 1.0) {
        double hi = 1.0;
        while (bound_at(hi).bound_raw >= 1.0 && hi <= 64.0) {
            lo = hi;
            hi *= 2.0;
        }
        for (int i = 0; i < 60 && hi - lo > 1e-13 * (1.0 + hi); ++i) {
            const double mid = 0.5 * (lo + hi);
            (bound_at(mid).bound_raw >= 1.0 ? lo : hi) = mid;
        }
        t_star = 0.5 * (lo + hi);
    }

    RateResult res;
    res.nats = t_star;

    bool quad_ok = true;
    const auto integrand = [&](double t) {
        const CoveragePoint pt = bound_at(t);
        quad_ok = quad_ok && pt.converged;
        return pt.bound;
    };
    double t0 = t_star;
    double width = std::max(0.5, t_star);
    const double outer_tol = 5e-5;
    for (int w = 0; w < 64; ++w) {
        const math::QuadResult part =
            math::integrate_adaptive(integrand, t0, t0 + width, outer_tol * 0.25);
        res.nats += part.value;
        res.abs_tol += part.abs_error;
        t0 += width;
        width *= 2.0;
        if (part.value < 0.25 * outer_tol && integrand(t0) < 1e-9)
            break;
    }
    res.converged = quad_ok;
    return res;
}

} // namespace hcn
