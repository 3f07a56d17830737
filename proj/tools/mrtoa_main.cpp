// SPDX-License-Identifier: Apache-2.0
//
// mrtoa: simulate multiband channel acquisition, estimate path
// time-of-arrivals with single-band or multiresolution multiband ESPRIT,
// and benchmark against the Cramer-Rao lower bound.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mrtoa/bench.hpp"
#include "mrtoa/crlb.hpp"
#include "mrtoa/json_io.hpp"
#include "mrtoa/selfcheck.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

void emit_error(int code, const std::string& message)
{
    std::cerr << json{{"error", message}, {"exit_code", code}}.dump() << "\n";
}

json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    return json::parse(in);
}

std::pair<std::string, std::string> split_override(const std::string& kv)
{
    const auto pos = kv.find('=');
    if (pos == std::string::npos)
        throw std::invalid_argument("override must be key=value: " + kv);
    return {kv.substr(0, pos), kv.substr(pos + 1)};
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, bool verbose)
{
    std::vector<mrtoa::ExperimentSpec> specs;
    try {
        specs = mrtoa::experiments_from_config(load_config(config_path));
    } catch (const json::exception& e) {
        emit_error(kExitParse, std::string("config parse error: ") + e.what());
        return kExitParse;
    } catch (const std::runtime_error& e) {
        emit_error(kExitParse, e.what());
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        emit_error(kExitValidation, e.what());
        return kExitValidation;
    }

    try {
        for (auto& spec : specs)
            for (const auto& kv : overrides) {
                const auto [key, value] = split_override(kv);
                mrtoa::apply_override(spec, key, value);
            }
        for (const auto& spec : specs)
            spec.validate();
    } catch (const std::invalid_argument& e) {
        emit_error(kExitValidation, e.what());
        return kExitValidation;
    }

    try {
        fs::create_directories(out_dir);
        for (const auto& spec : specs) {
            const auto start = std::chrono::steady_clock::now();
            const auto table = mrtoa::run_experiment(spec);
            const auto csv_path = fs::path(out_dir) / (spec.label + ".csv");
            const auto meta_path = fs::path(out_dir) / (spec.label + ".meta.json");
            std::ofstream(csv_path) << table.to_csv();
            std::ofstream(meta_path) << mrtoa::result_metadata(table, spec).dump(2) << "\n";
            if (verbose) {
                const auto elapsed = std::chrono::duration<double>(
                                         std::chrono::steady_clock::now() - start)
                                         .count();
                std::cerr << spec.label << ": " << table.rows.size() << " SNR points, "
                          << spec.trials << " trials each, " << elapsed << " s -> " << csv_path
                          << "\n";
            }
            std::cout << csv_path.string() << "\n";
        }
    } catch (const std::exception& e) {
        emit_error(kExitRuntime, e.what());
        return kExitRuntime;
    }
    return 0;
}

int cmd_preset(const std::string& tag, const std::string& out_path)
{
    try {
        json experiments = json::array();
        for (const auto& spec : mrtoa::preset_experiments(tag))
            experiments.push_back(mrtoa::experiment_to_json(spec));
        const json config{{"experiments", std::move(experiments)}};
        if (out_path.empty()) {
            std::cout << config.dump(2) << "\n";
        } else {
            std::ofstream(out_path) << config.dump(2) << "\n";
            std::cout << out_path << "\n";
        }
    } catch (const std::invalid_argument& e) {
        emit_error(kExitValidation, e.what());
        return kExitValidation;
    }
    return 0;
}

int cmd_crlb(const std::string& config_path, double snr_db)
{
    try {
        const auto specs = mrtoa::experiments_from_config(load_config(config_path));
        for (const auto& spec : specs) {
            spec.validate();
            const double p = mrtoa::mean_bin_power(spec.channel, spec.bands.front(),
                                                   spec.n_samples, spec.duration_s);
            const auto input =
                mrtoa::CrlbInput::make(spec.channel, spec.bands, spec.n_samples, spec.duration_s,
                                       mrtoa::noise_variance_for_snr(snr_db, p));
            const auto bounds = mrtoa::crlb_delays(input);
            json out;
            out["label"] = spec.label;
            out["snr_db"] = snr_db;
            for (Eigen::Index k = 0; k < bounds.size(); ++k)
                out["crlb_rmse_s"].push_back(std::sqrt(bounds(k)));
            std::cout << out.dump(2) << "\n";
        }
    } catch (const json::exception& e) {
        emit_error(kExitParse, std::string("config parse error: ") + e.what());
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        emit_error(kExitValidation, e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        emit_error(kExitRuntime, e.what());
        return kExitRuntime;
    }
    return 0;
}

int cmd_selfcheck()
{
    const auto results = mrtoa::run_selfcheck();
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.detail << ")\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : kExitRuntime;
}

int cmd_validate(const std::string& config_path)
{
    try {
        const auto specs = mrtoa::experiments_from_config(load_config(config_path));
        for (const auto& spec : specs)
            spec.validate();
        std::cout << "ok: " << specs.size() << " experiment(s)\n";
    } catch (const json::exception& e) {
        emit_error(kExitParse, std::string("config parse error: ") + e.what());
        return kExitParse;
    } catch (const std::runtime_error& e) {
        emit_error(kExitParse, e.what());
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        emit_error(kExitValidation, e.what());
        return kExitValidation;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"multiband super-resolution time-of-arrival estimation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    std::string preset_tag;
    std::string preset_out;
    std::vector<std::string> overrides;
    double crlb_snr = 30.0;
    bool verbose = false;

    auto* run = app.add_subcommand("run", "run experiments from a JSON config");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory for CSV + metadata");
    run->add_option("--override", overrides, "key=value spec override (repeatable)");
    run->add_flag("-v,--verbose", verbose, "progress to stderr");

    auto* preset = app.add_subcommand("preset", "emit a preset experiment config");
    preset->add_option("tag", preset_tag, "fig2a | fig2b | fig2c")->required();
    preset->add_option("--out", preset_out, "write config here (default: stdout)");

    auto* crlb = app.add_subcommand("crlb", "print delay CRLBs for a config");
    crlb->add_option("--config", config_path, "experiment config JSON")->required();
    crlb->add_option("--snr-db", crlb_snr, "SNR at which to evaluate the bound");

    auto* selfcheck = app.add_subcommand("selfcheck", "run the built-in consistency checks");
    (void)selfcheck;

    auto* validate = app.add_subcommand("validate", "validate a config without running it");
    validate->add_option("--config", config_path, "experiment config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("run"))
        return cmd_run(config_path, out_dir, overrides, verbose);
    if (app.got_subcommand("preset"))
        return cmd_preset(preset_tag, preset_out);
    if (app.got_subcommand("crlb"))
        return cmd_crlb(config_path, crlb_snr);
    if (app.got_subcommand("selfcheck"))
        return cmd_selfcheck();
    if (app.got_subcommand("validate"))
        return cmd_validate(config_path);
    return kExitParse;
}
