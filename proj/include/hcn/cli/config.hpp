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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcn/channel.hpp"
#include "hcn/simulator.hpp"

namespace hcn::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { coverage, rate, validate, compare };
enum class Scheme { siso, sdma, su_bf, custom };
enum class SweepVar {
    t_db,
    fd_ts,
    kappa,
    kappa_t_ue,
    kappa_r_bs,
    kappa_t_bs,
    kappa_r_ue,
    none
};
enum class OutputFormat { csv, json };

/// A fully resolved experiment description. All quantities are kept in the
/// units they are written in (dB powers and thresholds, metres for the
/// training distance, kappa rather than kappa^2, BS per km^2); conversion to
/// linear/kilometre quantities happens once, at to_network/to_impairments.
struct ExperimentSpec {
    Mode mode = Mode::coverage;
    Scheme scheme = Scheme::custom;
    SweepVar sweep = SweepVar::t_db;
    std::vector<double> sweep_values;
    double t_db = 0.0;  ///< fixed threshold for non-threshold sweeps

    // [network]
    double lambda_b = 0.01;  ///< BS per km^2
    double alpha = 3.0;
    int m_antennas = 5;
    int k_users = 3;
    double p_down_db = 15.0;
    double rho_up_db = 5.0;
    int tau = 3;
    double x_train_m = 15.0;

    // [impairments] -- kappa values as quoted in parameter sets
    double kappa_t_ue = 0.0;
    double kappa_r_bs = 0.0;
    double kappa_t_bs = 0.0;
    double kappa_r_ue = 0.0;
    double fd_ts = 0.0;
    std::optional<double> delta_override;

    // [mc]
    int drops = 10000;
    std::uint64_t seed = 12345;
    sim::Fidelity fidelity = sim::Fidelity::mark_level;
    sim::Association association = sim::Association::union_all;
    sim::EtxMode etx_mode = sim::EtxMode::correlated;
    ErrorShape error_shape = ErrorShape::k_users;
    VarianceMode variance_mode = VarianceMode::printed;
    double r_sim_km = 28.209479177387816;
    int workers = 0;

    // [output]
    std::string out_path;
    OutputFormat format = OutputFormat::csv;

    bool operator==(const ExperimentSpec&) const = default;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Network parameters in kilometre units with linear powers, after applying
/// the scheme preset (siso: M=K=1, sdma: K=M, su_bf: K=1).
inline NetworkConfig to_network(const ExperimentSpec& spec)
{
    NetworkConfig cfg;
    cfg.lambda_b = spec.lambda_b;
    cfg.alpha = spec.alpha;
    switch (spec.scheme) {
        case Scheme::siso:
            cfg.m_antennas = 1;
            cfg.k_users = 1;
            break;
        case Scheme::sdma:
            cfg.m_antennas = spec.m_antennas;
            cfg.k_users = spec.m_antennas;
            break;
        case Scheme::su_bf:
            cfg.m_antennas = spec.m_antennas;
            cfg.k_users = 1;
            break;
        case Scheme::custom:
            cfg.m_antennas = spec.m_antennas;
            cfg.k_users = spec.k_users;
            break;
    }
    cfg.p_down = db_to_linear(spec.p_down_db);
    cfg.rho_up = db_to_linear(spec.rho_up_db);
    cfg.tau = std::max(spec.tau, cfg.k_users);
    cfg.x_train = spec.x_train_m / 1000.0;
    return cfg;
}

inline ImpairmentProfile to_impairments(const ExperimentSpec& spec)
{
    ImpairmentProfile imp = make_impairments(
        spec.kappa_t_ue * spec.kappa_t_ue, spec.kappa_r_bs * spec.kappa_r_bs,
        spec.kappa_t_bs * spec.kappa_t_bs, spec.kappa_r_ue * spec.kappa_r_ue,
        spec.fd_ts);
    if (spec.delta_override)
        imp = with_delta_override(imp, *spec.delta_override);
    return imp;
}

inline sim::SimOptions to_sim_options(const ExperimentSpec& spec)
{
    sim::SimOptions o;
    o.fidelity = spec.fidelity;
    o.association = spec.association;
    o.etx_mode = spec.etx_mode;
    o.error_shape = spec.error_shape;
    o.variance_mode = spec.variance_mode;
    o.r_sim = spec.r_sim_km;
    o.n_drops = spec.drops;
    o.seed = spec.seed;
    o.n_workers = spec.workers;
    return o;
}

namespace detail {

inline std::string trim(const std::string& s)
{
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b)))
        ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1))))
        --e;
    return {b, e};
}

inline double parse_double(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return d;
}

inline long long parse_int(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    long long d = 0;
    try {
        d = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return d;
}

/// Sweep values: either a comma list "a,b,c" or a linspace "lo:hi:n".
inline std::vector<double> parse_values(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::istringstream ss(v);
        std::string lo_s, hi_s, n_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
            !std::getline(ss, n_s))
            throw ConfigError("key '" + key + "': expected lo:hi:n");
        const double lo = parse_double(key, trim(lo_s));
        const double hi = parse_double(key, trim(hi_s));
        const long long n = parse_int(key, trim(n_s));
        if (n < 2 || !(hi > lo))
            throw ConfigError("key '" + key + "': need hi > lo and n >= 2");
        for (long long i = 0; i < n; ++i)
            out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(n - 1));
        return out;
    }
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    return out;
}

template <class T>
T parse_enum(const std::string& key, const std::string& v,
             std::initializer_list<std::pair<const char*, T>> table)
{
    for (const auto& [name, val] : table)
        if (v == name)
            return val;
    std::string allowed;
    for (const auto& [name, val] : table) {
        if (!allowed.empty())
            allowed += "|";
        allowed += name;
    }
    throw ConfigError("key '" + key + "': unknown value '" + v + "' (expected " +
                      allowed + ")");
}

} // namespace detail

inline Mode parse_mode(const std::string& key, const std::string& v)
{
    return detail::parse_enum<Mode>(key, v,
                                    {{"coverage", Mode::coverage},
                                     {"rate", Mode::rate},
                                     {"validate", Mode::validate},
                                     {"compare", Mode::compare}});
}

inline sim::Fidelity parse_fidelity(const std::string& key, const std::string& v)
{
    return detail::parse_enum<sim::Fidelity>(
        key, v, {{"full", sim::Fidelity::full_mimo}, {"marks", sim::Fidelity::mark_level}});
}

inline sim::Association parse_association(const std::string& key, const std::string& v)
{
    return detail::parse_enum<sim::Association>(key, v,
                                                {{"union", sim::Association::union_all},
                                                 {"nearest", sim::Association::nearest},
                                                 {"max-sir", sim::Association::max_sir}});
}

inline sim::EtxMode parse_etx_mode(const std::string& key, const std::string& v)
{
    return detail::parse_enum<sim::EtxMode>(
        key, v,
        {{"correlated", sim::EtxMode::correlated},
         {"independent", sim::EtxMode::independent_gamma}});
}

inline ErrorShape parse_error_shape(const std::string& key, const std::string& v)
{
    return detail::parse_enum<ErrorShape>(
        key, v, {{"k", ErrorShape::k_users}, {"delta", ErrorShape::delta_cap}});
}

inline VarianceMode parse_variance_mode(const std::string& key, const std::string& v)
{
    return detail::parse_enum<VarianceMode>(
        key, v,
        {{"printed", VarianceMode::printed}, {"rederived", VarianceMode::rederived}});
}

/// Semantic validation; throws ConfigError naming the violated constraint.
inline void validate_spec(const ExperimentSpec& spec)
{
    if (!(spec.alpha > 2.0))
        throw ConfigError("alpha must exceed 2");
    if (spec.m_antennas < 1)
        throw ConfigError("m_antennas must be at least 1");
    if (spec.scheme == Scheme::custom &&
        (spec.k_users < 1 || spec.k_users > spec.m_antennas))
        throw ConfigError("k_users out of range: K <= M required");
    if (!(spec.lambda_b > 0.0))
        throw ConfigError("lambda_b must be positive");
    if (!(spec.x_train_m > 0.0))
        throw ConfigError("x_train_m must be positive");
    if (spec.kappa_t_ue < 0 || spec.kappa_r_bs < 0 || spec.kappa_t_bs < 0 ||
        spec.kappa_r_ue < 0)
        throw ConfigError("kappa values must be nonnegative");
    if (spec.fd_ts < 0)
        throw ConfigError("fd_ts must be nonnegative");
    if (spec.delta_override && std::fabs(*spec.delta_override) > 1.0)
        throw ConfigError("delta override must satisfy |delta| <= 1");
    if (spec.drops < 100)
        throw ConfigError("drops must be at least 100");
    if (!(spec.r_sim_km > 0.0))
        throw ConfigError("r_sim_km must be positive");
    if (spec.workers < 0)
        throw ConfigError("workers must be nonnegative");
    if (spec.sweep != SweepVar::none) {
        if (spec.sweep_values.size() < 1)
            throw ConfigError("sweep_values must not be empty");
        for (std::size_t i = 1; i < spec.sweep_values.size(); ++i)
            if (!(spec.sweep_values[i] > spec.sweep_values[i - 1]))
                throw ConfigError("sweep_values must be strictly increasing");
        if (spec.sweep != SweepVar::t_db && spec.sweep != SweepVar::fd_ts)
            for (double v : spec.sweep_values)
                if (v < 0.0)
                    throw ConfigError("kappa sweep values must be nonnegative");
        if (spec.sweep == SweepVar::fd_ts)
            for (double v : spec.sweep_values)
                if (v < 0.0)
                    throw ConfigError("fd_ts sweep values must be nonnegative");
    }
    if (spec.mode == Mode::rate && spec.sweep == SweepVar::t_db)
        throw ConfigError("rate mode does not sweep t_db; use fd_ts, kappa or none");
    if ((spec.mode == Mode::coverage || spec.mode == Mode::validate ||
         spec.mode == Mode::compare) &&
        spec.sweep == SweepVar::none)
        throw ConfigError("coverage-style modes require a sweep");
}

/// Parse a flat key = value configuration with [section] headers. Unknown
/// keys and sections are rejected. An empty file yields the baseline
/// defaults.
inline ExperimentSpec parse_config(std::istream& in)
{
    ExperimentSpec spec;
    std::string section;
    std::string line;
    int line_no = 0;
    bool sweep_values_given = false;

    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "network" && section != "impairments" && section != "mc" &&
                section != "output")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));

        if (section.empty()) {
            if (key == "mode")
                spec.mode = parse_mode(key, value);
            else if (key == "scheme")
                spec.scheme = detail::parse_enum<Scheme>(key, value,
                                                         {{"siso", Scheme::siso},
                                                          {"sdma", Scheme::sdma},
                                                          {"su_bf", Scheme::su_bf},
                                                          {"custom", Scheme::custom}});
            else if (key == "sweep")
                spec.sweep = detail::parse_enum<SweepVar>(
                    key, value,
                    {{"t_db", SweepVar::t_db},
                     {"fd_ts", SweepVar::fd_ts},
                     {"kappa", SweepVar::kappa},
                     {"kappa_t_ue", SweepVar::kappa_t_ue},
                     {"kappa_r_bs", SweepVar::kappa_r_bs},
                     {"kappa_t_bs", SweepVar::kappa_t_bs},
                     {"kappa_r_ue", SweepVar::kappa_r_ue},
                     {"none", SweepVar::none}});
            else if (key == "sweep_values") {
                spec.sweep_values = detail::parse_values(key, value);
                sweep_values_given = true;
            } else if (key == "t_db")
                spec.t_db = detail::parse_double(key, value);
            else
                throw ConfigError("unknown key '" + key + "' at top level");
        } else if (section == "network") {
            if (key == "lambda_b")
                spec.lambda_b = detail::parse_double(key, value);
            else if (key == "alpha")
                spec.alpha = detail::parse_double(key, value);
            else if (key == "m_antennas")
                spec.m_antennas = static_cast<int>(detail::parse_int(key, value));
            else if (key == "k_users")
                spec.k_users = static_cast<int>(detail::parse_int(key, value));
            else if (key == "p_down_db")
                spec.p_down_db = detail::parse_double(key, value);
            else if (key == "rho_up_db")
                spec.rho_up_db = detail::parse_double(key, value);
            else if (key == "tau")
                spec.tau = static_cast<int>(detail::parse_int(key, value));
            else if (key == "x_train_m")
                spec.x_train_m = detail::parse_double(key, value);
            else
                throw ConfigError("unknown key '" + key + "' in section [network]");
        } else if (section == "impairments") {
            if (key == "kappa_t_ue")
                spec.kappa_t_ue = detail::parse_double(key, value);
            else if (key == "kappa_r_bs")
                spec.kappa_r_bs = detail::parse_double(key, value);
            else if (key == "kappa_t_bs")
                spec.kappa_t_bs = detail::parse_double(key, value);
            else if (key == "kappa_r_ue")
                spec.kappa_r_ue = detail::parse_double(key, value);
            else if (key == "fd_ts")
                spec.fd_ts = detail::parse_double(key, value);
            else if (key == "delta")
                spec.delta_override = detail::parse_double(key, value);
            else
                throw ConfigError("unknown key '" + key + "' in section [impairments]");
        } else if (section == "mc") {
            if (key == "drops")
                spec.drops = static_cast<int>(detail::parse_int(key, value));
            else if (key == "seed")
                spec.seed = static_cast<std::uint64_t>(detail::parse_int(key, value));
            else if (key == "fidelity")
                spec.fidelity = parse_fidelity(key, value);
            else if (key == "association")
                spec.association = parse_association(key, value);
            else if (key == "etx_mode")
                spec.etx_mode = parse_etx_mode(key, value);
            else if (key == "error_shape")
                spec.error_shape = parse_error_shape(key, value);
            else if (key == "variance_mode")
                spec.variance_mode = parse_variance_mode(key, value);
            else if (key == "r_sim_km")
                spec.r_sim_km = detail::parse_double(key, value);
            else if (key == "workers")
                spec.workers = static_cast<int>(detail::parse_int(key, value));
            else
                throw ConfigError("unknown key '" + key + "' in section [mc]");
        } else if (section == "output") {
            if (key == "path")
                spec.out_path = value;
            else if (key == "format")
                spec.format = detail::parse_enum<OutputFormat>(
                    key, value, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}});
            else
                throw ConfigError("unknown key '" + key + "' in section [output]");
        }
    }

    if (spec.mode == Mode::rate && spec.sweep == SweepVar::t_db && !sweep_values_given)
        spec.sweep = SweepVar::none;
    if (!sweep_values_given) {
        if (spec.sweep == SweepVar::t_db)
            spec.sweep_values = detail::parse_values("sweep_values", "-10:20:31");
        else if (spec.sweep == SweepVar::fd_ts)
            spec.sweep_values = {0.0, 0.1, 0.2, 0.3};
        else if (spec.sweep != SweepVar::none)
            spec.sweep_values = {0.0, 0.04, 0.08, 0.15};
    }

    validate_spec(spec);
    return spec;
}

inline ExperimentSpec load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

inline const char* to_string(Mode m)
{
    switch (m) {
        case Mode::coverage: return "coverage";
        case Mode::rate: return "rate";
        case Mode::validate: return "validate";
        case Mode::compare: return "compare";
    }
    return "?";
}

inline const char* to_string(Scheme s)
{
    switch (s) {
        case Scheme::siso: return "siso";
        case Scheme::sdma: return "sdma";
        case Scheme::su_bf: return "su_bf";
        case Scheme::custom: return "custom";
    }
    return "?";
}

inline const char* to_string(SweepVar s)
{
    switch (s) {
        case SweepVar::t_db: return "t_db";
        case SweepVar::fd_ts: return "fd_ts";
        case SweepVar::kappa: return "kappa";
        case SweepVar::kappa_t_ue: return "kappa_t_ue";
        case SweepVar::kappa_r_bs: return "kappa_r_bs";
        case SweepVar::kappa_t_bs: return "kappa_t_bs";
        case SweepVar::kappa_r_ue: return "kappa_r_ue";
        case SweepVar::none: return "none";
    }
    return "?";
}

/// Serialise a spec back to the config format; reloading the result yields
/// an identical spec.
inline std::string save_config(const ExperimentSpec& spec)
{
    std::ostringstream out;
    out.precision(17);
    out << "mode = " << to_string(spec.mode) << "\n";
    out << "scheme = " << to_string(spec.scheme) << "\n";
    out << "sweep = " << to_string(spec.sweep) << "\n";
    if (spec.sweep != SweepVar::none) {
        out << "sweep_values = ";
        for (std::size_t i = 0; i < spec.sweep_values.size(); ++i)
            out << (i ? "," : "") << spec.sweep_values[i];
        out << "\n";
    }
    out << "t_db = " << spec.t_db << "\n";
    out << "\n[network]\n";
    out << "lambda_b = " << spec.lambda_b << "\n";
    out << "alpha = " << spec.alpha << "\n";
    out << "m_antennas = " << spec.m_antennas << "\n";
    out << "k_users = " << spec.k_users << "\n";
    out << "p_down_db = " << spec.p_down_db << "\n";
    out << "rho_up_db = " << spec.rho_up_db << "\n";
    out << "tau = " << spec.tau << "\n";
    out << "x_train_m = " << spec.x_train_m << "\n";
    out << "\n[impairments]\n";
    out << "kappa_t_ue = " << spec.kappa_t_ue << "\n";
    out << "kappa_r_bs = " << spec.kappa_r_bs << "\n";
    out << "kappa_t_bs = " << spec.kappa_t_bs << "\n";
    out << "kappa_r_ue = " << spec.kappa_r_ue << "\n";
    out << "fd_ts = " << spec.fd_ts << "\n";
    if (spec.delta_override)
        out << "delta = " << *spec.delta_override << "\n";
    out << "\n[mc]\n";
    out << "drops = " << spec.drops << "\n";
    out << "seed = " << spec.seed << "\n";
    out << "fidelity = "
        << (spec.fidelity == sim::Fidelity::full_mimo ? "full" : "marks") << "\n";
    out << "association = "
        << (spec.association == sim::Association::union_all
                ? "union"
                : spec.association == sim::Association::nearest ? "nearest" : "max-sir")
        << "\n";
    out << "etx_mode = "
        << (spec.etx_mode == sim::EtxMode::correlated ? "correlated" : "independent")
        << "\n";
    out << "error_shape = " << (spec.error_shape == ErrorShape::k_users ? "k" : "delta")
        << "\n";
    out << "variance_mode = "
        << (spec.variance_mode == VarianceMode::printed ? "printed" : "rederived")
        << "\n";
    out << "r_sim_km = " << spec.r_sim_km << "\n";
    out << "workers = " << spec.workers << "\n";
    out << "\n[output]\n";
    out << "path = " << spec.out_path << "\n";
    out << "format = " << (spec.format == OutputFormat::csv ? "csv" : "json") << "\n";
    return out.str();
}

} // namespace hcn::cli
