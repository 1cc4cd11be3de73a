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

#include <chrono>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcn/analytic.hpp"
#include "hcn/cli/config.hpp"
#include "hcn/simulator.hpp"

namespace hcn::cli {

struct ResultRow {
    std::string scheme;  ///< filled in compare mode only
    double sweep_value = 0.0;
    double analytic_raw = 0.0;
    double analytic_clamped = 0.0;
    double mc_mean = 0.0;
    double mc_se = 0.0;
    std::string status = "ok";
    double seconds = 0.0;
};

struct ResultTable {
    Mode mode = Mode::coverage;
    std::vector<ResultRow> rows;
    bool any_warning = false;
    bool validation_failed = false;
};

/// The bound contract checked by validate mode: the Monte Carlo estimate
/// must not exceed the analytic bound by more than two standard errors.
inline bool violates_bound(const ResultRow& row)
{
    return row.mc_mean - 2.0 * row.mc_se > row.analytic_raw;
}

namespace detail {

inline ExperimentSpec apply_sweep_value(ExperimentSpec spec, SweepVar var, double v)
{
    switch (var) {
        case SweepVar::t_db: spec.t_db = v; break;
        case SweepVar::fd_ts:
            spec.fd_ts = v;
            spec.delta_override.reset();
            break;
        case SweepVar::kappa:
            spec.kappa_t_ue = spec.kappa_r_bs = spec.kappa_t_bs = spec.kappa_r_ue = v;
            break;
        case SweepVar::kappa_t_ue: spec.kappa_t_ue = v; break;
        case SweepVar::kappa_r_bs: spec.kappa_r_bs = v; break;
        case SweepVar::kappa_t_bs: spec.kappa_t_bs = v; break;
        case SweepVar::kappa_r_ue: spec.kappa_r_ue = v; break;
        case SweepVar::none: break;
    }
    return spec;
}

inline double now_seconds()
{
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

/// Coverage rows for one scheme: a threshold sweep shares a single MC run
/// (every threshold is evaluated from the same per-drop SIR records),
/// other sweeps re-run the simulator per point.
inline void run_coverage_rows(const ExperimentSpec& spec, const std::string& scheme_label,
                              ResultTable& table)
{
    if (spec.sweep == SweepVar::t_db) {
        const NetworkConfig cfg = to_network(spec);
        const ImpairmentProfile imp = to_impairments(spec);
        std::vector<double> t_lin;
        t_lin.reserve(spec.sweep_values.size());
        for (double db : spec.sweep_values)
            t_lin.push_back(db_to_linear(db));

        const double mc_start = now_seconds();
        const sim::CoverageEstimate mc =
            sim::estimate_coverage(cfg, imp, t_lin, to_sim_options(spec));
        const double mc_share =
            (now_seconds() - mc_start) / static_cast<double>(t_lin.size());

        AnalyticOptions aopts;
        aopts.error_shape = spec.error_shape;
        aopts.variance_mode = spec.variance_mode;
        for (std::size_t i = 0; i < t_lin.size(); ++i) {
            const double t0 = now_seconds();
            const CoveragePoint pt = coverage_upper_bound(t_lin[i], cfg, imp, aopts);
            ResultRow row;
            row.scheme = scheme_label;
            row.sweep_value = spec.sweep_values[i];
            row.analytic_raw = pt.bound_raw;
            row.analytic_clamped = pt.bound;
            row.mc_mean = mc.per_target[i].mean;
            row.mc_se = mc.per_target[i].std_error;
            row.seconds = (now_seconds() - t0) + mc_share;
            if (!pt.converged)
                row.status = "quad_warning";
            if (mc.window_warning)
                row.status = row.status == "ok" ? "window_warning"
                                                : row.status + ",window_warning";
            table.any_warning = table.any_warning || row.status != "ok";
            table.rows.push_back(std::move(row));
        }
        return;
    }

    // impairment sweeps at the fixed threshold spec.t_db
    for (double v : spec.sweep_values) {
        const ExperimentSpec point = apply_sweep_value(spec, spec.sweep, v);
        const NetworkConfig cfg = to_network(point);
        const ImpairmentProfile imp = to_impairments(point);
        const double t_lin = db_to_linear(point.t_db);

        const double t0 = now_seconds();
        AnalyticOptions aopts;
        aopts.error_shape = point.error_shape;
        aopts.variance_mode = point.variance_mode;
        const CoveragePoint pt = coverage_upper_bound(t_lin, cfg, imp, aopts);
        const std::vector<double> targets{t_lin};
        const sim::CoverageEstimate mc =
            sim::estimate_coverage(cfg, imp, targets, to_sim_options(point));

        ResultRow row;
        row.scheme = scheme_label;
        row.sweep_value = v;
        row.analytic_raw = pt.bound_raw;
        row.analytic_clamped = pt.bound;
        row.mc_mean = mc.per_target[0].mean;
        row.mc_se = mc.per_target[0].std_error;
        row.seconds = now_seconds() - t0;
        if (!pt.converged)
            row.status = "quad_warning";
        if (mc.window_warning)
            row.status =
                row.status == "ok" ? "window_warning" : row.status + ",window_warning";
        table.any_warning = table.any_warning || row.status != "ok";
        table.rows.push_back(std::move(row));
    }
}

inline void run_rate_rows(const ExperimentSpec& spec, ResultTable& table)
{
    std::vector<double> values = spec.sweep == SweepVar::none
                                     ? std::vector<double>{0.0}
                                     : spec.sweep_values;
    for (double v : values) {
        const ExperimentSpec point = spec.sweep == SweepVar::none
                                         ? spec
                                         : apply_sweep_value(spec, spec.sweep, v);
        const NetworkConfig cfg = to_network(point);
        const ImpairmentProfile imp = to_impairments(point);

        const double t0 = now_seconds();
        AnalyticOptions aopts;
        aopts.error_shape = point.error_shape;
        aopts.variance_mode = point.variance_mode;
        const RateResult rate = average_rate(cfg, imp, aopts);
        const sim::RateEstimate mc = sim::estimate_rate(cfg, imp, to_sim_options(point));

        ResultRow row;
        row.sweep_value = v;
        row.analytic_raw = rate.nats;
        row.analytic_clamped = rate.nats;
        row.mc_mean = mc.rate.mean;
        row.mc_se = mc.rate.std_error;
        row.seconds = now_seconds() - t0;
        if (!rate.converged)
            row.status = "quad_warning";
        if (mc.window_warning)
            row.status =
                row.status == "ok" ? "window_warning" : row.status + ",window_warning";
        table.any_warning = table.any_warning || row.status != "ok";
        table.rows.push_back(std::move(row));
    }
}

} // namespace detail

/// Execute the experiment a spec describes. Coverage/validate run one curve,
/// compare runs the SISO / SDMA / SU-BF trio, rate integrates the bound and
/// averages ln(1 + SIR) over drops.
inline ResultTable run_experiment(const ExperimentSpec& spec)
{
    validate_spec(spec);
    ResultTable table;
    table.mode = spec.mode;

    switch (spec.mode) {
        case Mode::coverage:
            detail::run_coverage_rows(spec, "", table);
            break;
        case Mode::validate: {
            detail::run_coverage_rows(spec, "", table);
            for (const ResultRow& row : table.rows)
                if (violates_bound(row))
                    table.validation_failed = true;
            break;
        }
        case Mode::compare: {
            for (Scheme s : {Scheme::su_bf, Scheme::siso, Scheme::sdma}) {
                ExperimentSpec variant = spec;
                variant.scheme = s;
                detail::run_coverage_rows(variant, to_string(s), table);
            }
            break;
        }
        case Mode::rate:
            detail::run_rate_rows(spec, table);
            break;
    }
    return table;
}

/// CSV emission. Column set and order are fixed per mode; '.' decimal
/// separator, no locale dependence.
inline void write_csv(const ResultTable& table, std::ostream& out)
{
    out.imbue(std::locale::classic());
    out.precision(10);
    if (table.mode == Mode::compare)
        out << "scheme,";
    out << "sweep_value,analytic_raw,analytic_clamped,mc_mean,mc_se,status,seconds\n";
    for (const ResultRow& r : table.rows) {
        if (table.mode == Mode::compare)
            out << r.scheme << ",";
        out << r.sweep_value << "," << r.analytic_raw << "," << r.analytic_clamped
            << "," << r.mc_mean << "," << r.mc_se << "," << r.status << ","
            << r.seconds << "\n";
    }
}

inline nlohmann::json spec_to_json(const ExperimentSpec& spec)
{
    nlohmann::json j;
    j["mode"] = to_string(spec.mode);
    j["scheme"] = to_string(spec.scheme);
    j["sweep"] = to_string(spec.sweep);
    j["sweep_values"] = spec.sweep_values;
    j["t_db"] = spec.t_db;
    j["network"] = {{"lambda_b", spec.lambda_b},   {"alpha", spec.alpha},
                    {"m_antennas", spec.m_antennas}, {"k_users", spec.k_users},
                    {"p_down_db", spec.p_down_db}, {"rho_up_db", spec.rho_up_db},
                    {"tau", spec.tau},             {"x_train_m", spec.x_train_m}};
    j["impairments"] = {{"kappa_t_ue", spec.kappa_t_ue},
                        {"kappa_r_bs", spec.kappa_r_bs},
                        {"kappa_t_bs", spec.kappa_t_bs},
                        {"kappa_r_ue", spec.kappa_r_ue},
                        {"fd_ts", spec.fd_ts}};
    if (spec.delta_override)
        j["impairments"]["delta"] = *spec.delta_override;
    j["mc"] = {{"drops", spec.drops},
               {"seed", spec.seed},
               {"fidelity", spec.fidelity == sim::Fidelity::full_mimo ? "full" : "marks"},
               {"association", spec.association == sim::Association::union_all
                                   ? "union"
                                   : spec.association == sim::Association::nearest
                                         ? "nearest"
                                         : "max-sir"},
               {"etx_mode",
                spec.etx_mode == sim::EtxMode::correlated ? "correlated" : "independent"},
               {"error_shape", spec.error_shape == ErrorShape::k_users ? "k" : "delta"},
               {"variance_mode",
                spec.variance_mode == VarianceMode::printed ? "printed" : "rederived"},
               {"r_sim_km", spec.r_sim_km},
               {"workers", spec.workers}};
    return j;
}

/// JSON emission with the resolved spec embedded.
inline void write_json(const ExperimentSpec& spec, const ResultTable& table,
                       std::ostream& out)
{
    nlohmann::json j;
    j["spec"] = spec_to_json(spec);
    j["results"] = nlohmann::json::array();
    for (const ResultRow& r : table.rows) {
        nlohmann::json row = {{"sweep_value", r.sweep_value},
                              {"analytic_raw", r.analytic_raw},
                              {"analytic_clamped", r.analytic_clamped},
                              {"mc_mean", r.mc_mean},
                              {"mc_se", r.mc_se},
                              {"status", r.status},
                              {"seconds", r.seconds}};
        if (table.mode == Mode::compare)
            row["scheme"] = r.scheme;
        j["results"].push_back(std::move(row));
    }
    j["validation_failed"] = table.validation_failed;
    out << j.dump(2) << "\n";
}

/// Exit-code contract: 0 success, 1 config error (raised before this point),
/// 2 validation failure, 3 numerical warning present.
inline int exit_code(const ResultTable& table)
{
    if (table.validation_failed)
        return 2;
    if (table.any_warning)
        return 3;
    return 0;
}

} // namespace hcn::cli
