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
#include <string>

#include "hcn/math/bessel.hpp"

namespace hcn {

/// Deployment and training-phase parameters. Lengths and the density must
/// use one consistent unit system (the CLI feeds kilometres and BS/km^2).
struct NetworkConfig {
    double lambda_b = 0.01;  ///< BS density, points per unit area
    double alpha = 3.0;      ///< path-loss exponent, must exceed 2
    int m_antennas = 5;      ///< BS antennas M
    int k_users = 3;         ///< users per cell K, 1 <= K <= M
    double p_down = 31.622776601683793;  ///< downlink power, linear
    double rho_up = 3.1622776601683795;  ///< uplink pilot power, linear
    int tau = 3;             ///< training length in symbols, tau >= K
    double x_train = 0.015;  ///< fixed uplink training distance
};

inline void validate(const NetworkConfig& cfg)
{
    if (!(cfg.alpha > 2.0))
        throw std::domain_error("alpha must exceed 2");
    if (cfg.m_antennas < 1)
        throw std::domain_error("m_antennas must be at least 1");
    if (cfg.k_users < 1 || cfg.k_users > cfg.m_antennas)
        throw std::domain_error("k_users out of range: K <= M required");
    if (!(cfg.lambda_b > 0.0))
        throw std::domain_error("lambda_b must be positive");
    if (!(cfg.x_train > 0.0))
        throw std::domain_error("x_train must be positive");
    if (cfg.tau < cfg.k_users)
        throw std::domain_error("tau must be at least k_users");
    if (!(cfg.p_down > 0.0) || !(cfg.rho_up > 0.0))
        throw std::domain_error("powers must be positive");
}

/// Lag-one Jakes autocorrelation J0(2 pi fD Ts).
inline double jakes_delta(double fd_ts)
{
    if (!(fd_ts >= 0.0) || !std::isfinite(fd_ts))
        throw std::domain_error("jakes_delta: fd_ts must be finite and nonnegative");
    return math::bessel_j0(2.0 * std::numbers::pi * fd_ts);
}

/// Distortion severities (kappa^2 values) and temporal-correlation inputs.
/// delta defaults to the Jakes lag-one value of fd_ts; figure-style
/// parameter sets that state delta directly can override it.
struct ImpairmentProfile {
    double kt_ue = 0.0;  ///< kappa^2_t,UE
    double kr_bs = 0.0;  ///< kappa^2_r,BS
    double kt_bs = 0.0;  ///< kappa^2_t,BS
    double kr_ue = 0.0;  ///< kappa^2_r,UE
    double fd_ts = 0.0;  ///< normalised Doppler shift fD*Ts
    double delta = 1.0;  ///< temporal correlation, |delta| <= 1
};

inline ImpairmentProfile make_impairments(double kt_ue, double kr_bs, double kt_bs,
                                          double kr_ue, double fd_ts = 0.0)
{
    if (kt_ue < 0 || kr_bs < 0 || kt_bs < 0 || kr_ue < 0)
        throw std::domain_error("impairment variances must be nonnegative");
    ImpairmentProfile imp;
    imp.kt_ue = kt_ue;
    imp.kr_bs = kr_bs;
    imp.kt_bs = kt_bs;
    imp.kr_ue = kr_ue;
    imp.fd_ts = fd_ts;
    imp.delta = jakes_delta(fd_ts);
    return imp;
}

inline ImpairmentProfile with_delta_override(ImpairmentProfile imp, double delta)
{
    if (std::fabs(delta) > 1.0)
        throw std::domain_error("delta override must satisfy |delta| <= 1");
    imp.delta = delta;
    return imp;
}

/// Channel-estimation statistics derived from the training phase.
struct ChannelStats {
    double sigma2_hat = 1.0;   ///< estimate variance
    double sigma2_err = 0.0;   ///< pilot-contamination error variance
    double sigma2_aged = 0.0;  ///< combined aging + contamination variance
    int delta_cap = 1;         ///< M - K + 1
};

/// Which denominator the estimate variance uses: the formula exactly as
/// printed, or the re-derived variant that scales the x^alpha term by
/// (alpha - 2) / p_tr. The printed form is the default; the re-derived mode
/// exists to expose the difference, not to hide it.
enum class VarianceMode { printed, rederived };

/// Variance of the training-phase interference by Campbell's theorem:
/// 2 M pi lambda_B x^(2 - alpha) / (alpha - 2).
inline double training_interference_variance(const NetworkConfig& cfg)
{
    if (!(cfg.alpha > 2.0))
        throw std::domain_error("alpha must exceed 2");
    return 2.0 * cfg.m_antennas * std::numbers::pi * cfg.lambda_b *
           std::pow(cfg.x_train, 2.0 - cfg.alpha) / (cfg.alpha - 2.0);
}

/// MMSE estimate/error variances under pilot contamination and uplink
/// distortion, plus the aged error variance 1 - delta^2 sigma2_hat.
/// In the printed (interference-limited) form neither rho_up nor tau enters.
inline ChannelStats estimate_variances(const NetworkConfig& cfg,
                                       const ImpairmentProfile& imp,
                                       VarianceMode mode = VarianceMode::printed)
{
    validate(cfg);
    const double am2 = cfg.alpha - 2.0;
    const double kappa_up = imp.kr_bs + imp.kt_ue;
    const double contamination = 2.0 * cfg.m_antennas * std::numbers::pi *
                                 cfg.lambda_b * cfg.x_train * cfg.x_train;
    double path_term = std::pow(cfg.x_train, cfg.alpha);
    if (mode == VarianceMode::rederived) {
        const double p_tr = cfg.tau * cfg.rho_up;
        path_term *= am2 / p_tr;
    }
    const double denom = (kappa_up + 1.0) * am2 + contamination + path_term;

    ChannelStats st;
    st.sigma2_hat = am2 / denom;
    st.sigma2_err = (kappa_up * am2 + contamination) / denom;
    st.sigma2_aged = 1.0 - imp.delta * imp.delta * st.sigma2_hat;
    st.delta_cap = cfg.m_antennas - cfg.k_users + 1;
    return st;
}

} // namespace hcn
