// SPDX-License-Identifier: Apache-2.0
//
// hcn -- coverage and rate analysis for multi-antenna cellular downlinks with
// residual transceiver hardware impairments, pilot contamination and channel
// aging over Poisson-distributed base stations.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hcn/cli/config.hpp"
#include "hcn/cli/run.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::optional<std::string> fidelity;
    std::optional<std::string> association;
    std::optional<std::string> etx_mode;
    std::optional<std::string> error_shape;
    std::optional<std::string> variance_mode;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov)
{
    cmd->add_option("--config", ov.config_path, "configuration file (key = value)");
    cmd->add_option("--seed", ov.seed, "master RNG seed (overrides HCN_SEED and config)");
    cmd->add_option("--drops", ov.drops, "Monte Carlo drop count");
    cmd->add_option("--fidelity", ov.fidelity, "simulator fidelity: full|marks");
    cmd->add_option("--association", ov.association,
                    "association rule: union|nearest|max-sir");
    cmd->add_option("--etx-mode", ov.etx_mode,
                    "transmit-distortion coupling: correlated|independent");
    cmd->add_option("--error-shape", ov.error_shape,
                    "estimation-error Gamma shape: k|delta");
    cmd->add_option("--variance-mode", ov.variance_mode,
                    "estimate-variance formula: printed|rederived");
    cmd->add_option("--out", ov.out_path, "output path (default stdout)");
    cmd->add_option("--format", ov.format, "output format: csv|json");
}

hcn::cli::ExperimentSpec build_spec(const CliOverrides& ov, hcn::cli::Mode mode)
{
    using namespace hcn::cli;
    ExperimentSpec spec;
    if (!ov.config_path.empty()) {
        spec = load_config(ov.config_path);
    } else {
        std::istringstream empty;
        spec = parse_config(empty);
    }
    spec.mode = mode;
    if (mode == Mode::rate && spec.sweep == SweepVar::t_db)
        spec.sweep = SweepVar::none;

    if (ov.seed)
        spec.seed = *ov.seed;
    else if (const char* env = std::getenv("HCN_SEED")) {
        try {
            spec.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("HCN_SEED: cannot parse '" + std::string(env) + "'");
        }
    }
    if (ov.drops)
        spec.drops = *ov.drops;
    if (ov.fidelity)
        spec.fidelity = parse_fidelity("--fidelity", *ov.fidelity);
    if (ov.association)
        spec.association = parse_association("--association", *ov.association);
    if (ov.etx_mode)
        spec.etx_mode = parse_etx_mode("--etx-mode", *ov.etx_mode);
    if (ov.error_shape)
        spec.error_shape = parse_error_shape("--error-shape", *ov.error_shape);
    if (ov.variance_mode)
        spec.variance_mode = parse_variance_mode("--variance-mode", *ov.variance_mode);
    if (ov.out_path)
        spec.out_path = *ov.out_path;
    if (ov.format)
        spec.format = *ov.format == "json" ? OutputFormat::json
                      : *ov.format == "csv"
                          ? OutputFormat::csv
                          : throw ConfigError("--format: expected csv|json");
    validate_spec(spec);
    return spec;
}

int run(const CliOverrides& ov, hcn::cli::Mode mode)
{
    using namespace hcn::cli;
    const ExperimentSpec spec = build_spec(ov, mode);
    const ResultTable table = run_experiment(spec);

    const bool json = spec.format == OutputFormat::json ||
                      (mode == Mode::rate && spec.sweep == SweepVar::none &&
                       spec.format != OutputFormat::csv);
    const auto emit = [&](std::ostream& out) {
        if (json)
            write_json(spec, table, out);
        else
            write_csv(table, out);
    };
    if (spec.out_path.empty()) {
        emit(std::cout);
    } else {
        std::ofstream out(spec.out_path);
        if (!out)
            throw ConfigError("cannot open output path '" + spec.out_path + "'");
        emit(out);
    }

    if (table.validation_failed)
        std::cerr << "validate: Monte Carlo exceeds the analytic bound by more than"
                     " 2 standard errors\n";
    return exit_code(table);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"coverage and rate analysis for impaired multi-antenna cellular"
                 " downlinks over Poisson-distributed base stations"};
    app.require_subcommand(1);

    CliOverrides ov;
    CLI::App* c_cov = app.add_subcommand("coverage", "analytic bound and MC coverage sweep");
    CLI::App* c_rate = app.add_subcommand("rate", "average achievable user rate");
    CLI::App* c_val =
        app.add_subcommand("validate", "check the bound against the simulator");
    CLI::App* c_cmp =
        app.add_subcommand("compare", "SISO / SDMA / SU-BF scheme comparison");
    for (CLI::App* cmd : {c_cov, c_rate, c_val, c_cmp})
        add_common_options(cmd, ov);

    CLI11_PARSE(app, argc, argv);

    hcn::cli::Mode mode = hcn::cli::Mode::coverage;
    if (c_rate->parsed())
        mode = hcn::cli::Mode::rate;
    else if (c_val->parsed())
        mode = hcn::cli::Mode::validate;
    else if (c_cmp->parsed())
        mode = hcn::cli::Mode::compare;

    try {
        return run(ov, mode);
    } catch (const hcn::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
