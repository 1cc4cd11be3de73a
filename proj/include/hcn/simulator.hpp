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

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hcn/analytic.hpp"
#include "hcn/channel.hpp"
#include "hcn/math/sampling.hpp"

namespace hcn::sim {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    double radius() const { return std::hypot(x, y); }
};

/// SIR term values for one candidate serving BS.
struct TermRecord {
    double z = 0.0;         ///< desired power |h_hat^H w|^2
    double e = 0.0;         ///< estimation-error term
    double i_eta_t = 0.0;   ///< transmit-distortion term
    double i_eta_r = 0.0;   ///< receive-distortion term
};

/// One sampled network realisation around the typical user at the origin.
struct PppDrop {
    std::vector<Point2> bs_positions;
    std::vector<double> marks;              ///< per-BS interference marks g_l
    std::vector<TermRecord> serving_terms;  ///< terms when BS i serves
};

enum class Fidelity { full_mimo, mark_level };
enum class Association { union_all, nearest, max_sir };
enum class EtxMode { correlated, independent_gamma };

struct SimOptions {
    Fidelity fidelity = Fidelity::mark_level;
    Association association = Association::union_all;
    EtxMode etx_mode = EtxMode::correlated;
    ErrorShape error_shape = ErrorShape::k_users;
    VarianceMode variance_mode = VarianceMode::printed;
    /// Simulation window: disk of this radius around the typical user.
    /// Default is the equal-area disk of a 50 x 50 window.
    double r_sim = 28.209479177387816;
    int n_drops = 10000;
    std::uint64_t seed = 12345;
    int n_workers = 0;  ///< 0 = hardware concurrency
    /// Add the Campbell mean of the out-of-window interference,
    /// 2 pi lambda K r_sim^(2-alpha) / (alpha - 2), to every candidate's
    /// interference. Removes the window-truncation bias.
    bool far_field_compensation = true;
};

/// Poisson point sample in a disk of radius r_sim centred at the origin.
inline PppDrop sample_ppp(double lambda_b, double r_sim, math::RandomStream& rng)
{
    if (!(r_sim > 0.0))
        throw std::domain_error("sample_ppp: r_sim must be positive");
    if (!(lambda_b >= 0.0))
        throw std::domain_error("sample_ppp: lambda_b must be nonnegative");
    const double mean = lambda_b * std::numbers::pi * r_sim * r_sim;
    const std::uint64_t n = mean > 0.0 ? math::sample_poisson(mean, rng) : 0;
    PppDrop drop;
    drop.bs_positions.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double r = r_sim * std::sqrt(rng.uniform());
        const double th = 2.0 * std::numbers::pi * rng.uniform();
        drop.bs_positions.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return drop;
}

/// ZF precoder: normalised columns of Hbar (Hbar^H Hbar)^(-1) where Hbar is
/// the column-normalised estimate. Returns false when the Gram matrix is
/// numerically singular (condition number above 1e12) and the caller should
/// redraw.
inline bool try_zf_precoder(const Eigen::MatrixXcd& h_hat, Eigen::MatrixXcd& w_out)
{
    const Eigen::Index m = h_hat.rows();
    const Eigen::Index k = h_hat.cols();
    if (k > m)
        throw std::invalid_argument("zf_precoder: need K <= M");

    Eigen::MatrixXcd hbar = h_hat;
    for (Eigen::Index j = 0; j < k; ++j) {
        const double n = hbar.col(j).norm();
        if (!(n > 0.0))
            return false;
        hbar.col(j) /= n;
    }

    const Eigen::MatrixXcd gram = hbar.adjoint() * hbar;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(k - 1);
    if (!(smin > 0.0) || smax / smin > 1e12)
        return false;

    w_out = hbar * gram.inverse();
    for (Eigen::Index j = 0; j < k; ++j)
        w_out.col(j) /= w_out.col(j).norm();
    return true;
}

inline Eigen::MatrixXcd zf_precoder(const Eigen::MatrixXcd& h_hat)
{
    Eigen::MatrixXcd w;
    if (!try_zf_precoder(h_hat, w))
        throw std::runtime_error("zf_precoder: numerically singular estimate");
    return w;
}

inline Eigen::MatrixXcd gaussian_matrix(Eigen::Index m, Eigen::Index k,
                                        math::RandomStream& rng)
{
    Eigen::MatrixXcd h(m, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            h(i, j) = rng.cgauss();
    return h;
}

/// Isotropic unit-norm column set with mutually orthogonal columns (thin Q
/// of a Gaussian matrix). This is the interferer precoder model that makes
/// the marks |g^H W|^2 exactly Gamma(K, 1).
inline Eigen::MatrixXcd haar_frame(Eigen::Index m, Eigen::Index k,
                                   math::RandomStream& rng)
{
    const Eigen::MatrixXcd a = gaussian_matrix(m, k, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(m, k);
}

/// Per-candidate-BS channel state: the channel estimate, the aged error of
/// the typical user's link and the resulting ZF precoder.
struct MimoDrop {
    Eigen::MatrixXcd h_hat;     ///< M x K, entries CN(0, sigma2_hat)
    Eigen::VectorXcd err_aged;  ///< M, entries CN(0, sigma2_aged)
    Eigen::MatrixXcd precoder;  ///< M x K, unit-norm ZF columns
};

inline MimoDrop sample_mimo(int m, int k, const ChannelStats& stats,
                            math::RandomStream& rng)
{
    MimoDrop d;
    const double sh = std::sqrt(stats.sigma2_hat);
    const double se = std::sqrt(std::max(0.0, stats.sigma2_aged));
    for (;;) {
        d.h_hat = sh * gaussian_matrix(m, k, rng);
        if (try_zf_precoder(d.h_hat, d.precoder))
            break;
    }
    d.err_aged = Eigen::VectorXcd(m);
    for (int i = 0; i < m; ++i)
        d.err_aged(i) = se * rng.cgauss();
    return d;
}

/// SIR terms from explicit matrix products: Z = |h_hat_k^H w_k|^2,
/// E = delta^-2 (1 + kt_bs) ||e^H W||^2, I_eta_t = kt_bs Z (or an
/// independent Gamma draw), I_eta_r = kr_ue ||h||^2 with the true aged
/// channel h = delta h_hat_k + e.
inline TermRecord assemble_sir_terms(const MimoDrop& mimo, const ChannelStats& stats,
                                     const ImpairmentProfile& imp,
                                     EtxMode etx_mode, math::RandomStream& rng)
{
    if (imp.delta == 0.0)
        throw std::domain_error("assemble_sir_terms: delta = 0 not supported");
    TermRecord t;
    t.z = std::norm(mimo.h_hat.col(0).dot(mimo.precoder.col(0)));
    const double enorm2 = (mimo.err_aged.adjoint() * mimo.precoder).squaredNorm();
    t.e = (1.0 + imp.kt_bs) / (imp.delta * imp.delta) * enorm2;
    if (etx_mode == EtxMode::correlated)
        t.i_eta_t = imp.kt_bs * t.z;
    else
        t.i_eta_t = imp.kt_bs > 0.0
                        ? math::sample_gamma(stats.delta_cap,
                                             imp.kt_bs * stats.sigma2_hat, rng)
                        : 0.0;
    const Eigen::VectorXcd h_true = imp.delta * mimo.h_hat.col(0) + mimo.err_aged;
    t.i_eta_r = imp.kr_ue * h_true.squaredNorm();
    return t;
}

/// SIR terms sampled straight from the Proposition-level distributions,
/// no matrix algebra.
inline TermRecord mark_level_terms(const ChannelStats& stats, const ImpairmentProfile& imp,
                                   const SirDecomposition& dec, EtxMode etx_mode,
                                   math::RandomStream& rng)
{
    TermRecord t;
    t.z = math::sample_gamma(dec.delta_cap, stats.sigma2_hat, rng);
    t.e = dec.scale_error > 0.0
              ? math::sample_gamma(dec.error_shape, dec.scale_error, rng)
              : 0.0;
    if (etx_mode == EtxMode::correlated)
        t.i_eta_t = imp.kt_bs * t.z;
    else
        t.i_eta_t = imp.kt_bs > 0.0
                        ? math::sample_gamma(dec.delta_cap,
                                             imp.kt_bs * stats.sigma2_hat, rng)
                        : 0.0;
    t.i_eta_r = imp.kr_ue > 0.0
                    ? imp.kr_ue * math::sample_gamma(dec.m_antennas, 1.0, rng)
                    : 0.0;
    return t;
}

/// Fill a sampled PPP skeleton with marks and serving terms and return the
/// per-candidate SIR values.
inline std::vector<double> mark_level_drop(const ChannelStats& stats,
                                           const ImpairmentProfile& imp,
                                           const SirDecomposition& dec, PppDrop& ppp,
                                           double alpha, math::RandomStream& rng,
                                           EtxMode etx_mode = EtxMode::correlated,
                                           double far_field = 0.0)
{
    const std::size_t n = ppp.bs_positions.size();
    ppp.marks.resize(n);
    ppp.serving_terms.resize(n);
    std::vector<double> weights(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ppp.marks[i] = math::sample_gamma(dec.k_users, 1.0, rng);
        ppp.serving_terms[i] = mark_level_terms(stats, imp, dec, etx_mode, rng);
        weights[i] = ppp.marks[i] *
                     std::pow(ppp.bs_positions[i].radius(), -alpha);
        total += weights[i];
    }
    std::vector<double> sir(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ppp.bs_positions[i].radius();
        const double path = std::pow(r, -alpha);
        const TermRecord& t = ppp.serving_terms[i];
        const double interference = total - weights[i] + far_field;
        sir[i] = t.z * path /
                 ((t.e + t.i_eta_t + t.i_eta_r) * path + interference);
    }
    return sir;
}

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

struct CoverageEstimate {
    std::vector<Estimate> per_target;
    double empty_fraction = 0.0;
    bool window_warning = false;  ///< more than 1% of drops had no BS
};

struct RateEstimate {
    Estimate rate;
    double empty_fraction = 0.0;
    bool window_warning = false;
};

namespace detail {

struct DropOutcome {
    double best_sir = -1.0;
    double nearest_sir = -1.0;
    bool empty = true;
};

inline DropOutcome run_drop(const NetworkConfig& cfg, const ImpairmentProfile& imp,
                            const ChannelStats& stats, const SirDecomposition& dec,
                            const SimOptions& opts, math::RandomStream& rng)
{
    DropOutcome out;
    PppDrop ppp = sample_ppp(cfg.lambda_b, opts.r_sim, rng);
    const std::size_t n = ppp.bs_positions.size();
    if (n == 0)
        return out;
    out.empty = false;

    const double far =
        opts.far_field_compensation
            ? 2.0 * std::numbers::pi * cfg.lambda_b * cfg.k_users *
                  std::pow(opts.r_sim, 2.0 - cfg.alpha) / (cfg.alpha - 2.0)
            : 0.0;

    std::vector<double> sir;
    if (opts.fidelity == Fidelity::mark_level) {
        sir = mark_level_drop(stats, imp, dec, ppp, cfg.alpha, rng, opts.etx_mode, far);
    } else {
        ppp.marks.resize(n);
        ppp.serving_terms.resize(n);
        std::vector<double> weights(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const MimoDrop mimo =
                sample_mimo(cfg.m_antennas, cfg.k_users, stats, rng);
            ppp.serving_terms[i] =
                assemble_sir_terms(mimo, stats, imp, opts.etx_mode, rng);
            const Eigen::MatrixXcd frame =
                haar_frame(cfg.m_antennas, cfg.k_users, rng);
            const Eigen::VectorXcd g =
                gaussian_matrix(cfg.m_antennas, 1, rng).col(0);
            ppp.marks[i] = (g.adjoint() * frame).squaredNorm();
            weights[i] =
                ppp.marks[i] * std::pow(ppp.bs_positions[i].radius(), -cfg.alpha);
            total += weights[i];
        }
        sir.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double path = std::pow(ppp.bs_positions[i].radius(), -cfg.alpha);
            const TermRecord& t = ppp.serving_terms[i];
            sir[i] = t.z * path /
                     ((t.e + t.i_eta_t + t.i_eta_r) * path + total - weights[i] + far);
        }
    }

    std::size_t nearest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.best_sir = std::max(out.best_sir, sir[i]);
        if (ppp.bs_positions[i].radius() < ppp.bs_positions[nearest].radius())
            nearest = i;
    }
    out.nearest_sir = sir[nearest];
    return out;
}

inline std::vector<DropOutcome> run_drops(const NetworkConfig& cfg,
                                          const ImpairmentProfile& imp,
                                          const SimOptions& opts)
{
    validate(cfg);
    AnalyticOptions aopts;
    aopts.error_shape = opts.error_shape;
    aopts.variance_mode = opts.variance_mode;
    const ChannelStats stats = estimate_variances(cfg, imp, opts.variance_mode);
    const SirDecomposition dec = decompose(cfg, imp, aopts);

    std::vector<DropOutcome> outcomes(static_cast<std::size_t>(opts.n_drops));
    const int workers =
        opts.n_workers > 0
            ? opts.n_workers
            : std::max(1u, std::thread::hardware_concurrency());

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t d = begin; d < end; ++d) {
            math::RandomStream rng = math::RandomStream::substream(opts.seed, d);
            outcomes[d] = run_drop(cfg, imp, stats, dec, opts, rng);
        }
    };

    if (workers <= 1 || opts.n_drops < 2 * workers) {
        worker(0, outcomes.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (outcomes.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t b = static_cast<std::size_t>(w) * chunk;
            const std::size_t e = std::min(outcomes.size(), b + chunk);
            if (b < e)
                pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool)
            th.join();
    }
    return outcomes;
}

} // namespace detail

/// Monte Carlo coverage: fraction of drops whose associated SIR exceeds
/// each target. With the default union association a drop is covered at T
/// if any candidate BS clears it. Empty drops count as not covered.
inline CoverageEstimate estimate_coverage(const NetworkConfig& cfg,
                                          const ImpairmentProfile& imp,
                                          std::span<const double> t_targets,
                                          const SimOptions& opts)
{
    if (opts.n_drops < 100)
        throw std::invalid_argument("estimate_coverage: need at least 100 drops");
    const std::vector<detail::DropOutcome> outcomes = detail::run_drops(cfg, imp, opts);

    CoverageEstimate est;
    est.per_target.resize(t_targets.size());
    std::size_t empties = 0;
    for (const auto& o : outcomes)
        empties += o.empty ? 1 : 0;
    const double n = static_cast<double>(outcomes.size());
    est.empty_fraction = static_cast<double>(empties) / n;
    est.window_warning = est.empty_fraction > 0.01;

    for (std::size_t j = 0; j < t_targets.size(); ++j) {
        std::size_t hits = 0;
        for (const auto& o : outcomes) {
            const double s =
                opts.association == Association::nearest ? o.nearest_sir : o.best_sir;
            hits += (!o.empty && s > t_targets[j]) ? 1 : 0;
        }
        const double p = static_cast<double>(hits) / n;
        est.per_target[j] = {p, std::sqrt(p * (1.0 - p) / n)};
    }
    return est;
}

/// Monte Carlo average user rate: mean of ln(1 + SIR) with the SIR chosen
/// by the association rule (best candidate by default).
inline RateEstimate estimate_rate(const NetworkConfig& cfg, const ImpairmentProfile& imp,
                                  const SimOptions& opts)
{
    if (opts.n_drops < 100)
        throw std::invalid_argument("estimate_rate: need at least 100 drops");
    const std::vector<detail::DropOutcome> outcomes = detail::run_drops(cfg, imp, opts);

    RateEstimate est;
    std::size_t empties = 0;
    double sum = 0.0;
    double sumsq = 0.0;
    for (const auto& o : outcomes) {
        empties += o.empty ? 1 : 0;
        const double s =
            opts.association == Association::nearest ? o.nearest_sir : o.best_sir;
        const double v = o.empty ? 0.0 : std::log1p(std::max(0.0, s));
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(outcomes.size());
    est.rate.mean = sum / n;
    const double var = std::max(0.0, sumsq / n - est.rate.mean * est.rate.mean);
    est.rate.std_error = std::sqrt(var / n);
    est.empty_fraction = static_cast<double>(empties) / n;
    est.window_warning = est.empty_fraction > 0.01;
    return est;
}

} // namespace hcn::sim
