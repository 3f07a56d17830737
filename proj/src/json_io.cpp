// SPDX-License-Identifier: Apache-2.0
#include "mrtoa/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace mrtoa {

using nlohmann::json;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

json channel_to_json(const MultipathChannel& channel)
{
    json paths = json::array();
    for (const auto& p : channel.paths())
        paths.push_back({{"gain", p.gain}, {"delay_s", p.delay_s}});
    return {{"paths", std::move(paths)}};
}

MultipathChannel channel_from_json(const json& j)
{
    if (!j.contains("paths") || !j["paths"].is_array())
        throw std::invalid_argument("channel: expected a \"paths\" array");
    std::vector<PathComponent> paths;
    for (const auto& p : j["paths"])
        paths.push_back({p.at("gain").get<double>(), p.at("delay_s").get<double>()});
    return MultipathChannel(std::move(paths));
}

json bands_to_json(const std::vector<BandConfig>& bands)
{
    json out = json::array();
    for (const auto& b : bands)
        out.push_back({{"center_hz", b.center_rad / kTwoPi},
                       {"bandwidth_hz", b.bandwidth_rad / kTwoPi}});
    return out;
}

std::vector<BandConfig> bands_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("bands: expected an array");
    std::vector<BandConfig> bands;
    for (const auto& b : j)
        bands.push_back({kTwoPi * b.at("center_hz").get<double>(),
                         kTwoPi * b.at("bandwidth_hz").get<double>()});
    return bands;
}

json experiment_to_json(const ExperimentSpec& spec)
{
    json j;
    j["label"] = spec.label;
    if (spec.scenario_tag == "custom")
        j["scenario"] = channel_to_json(spec.channel);
    else
        j["scenario"] = spec.scenario_tag;
    j["bands"] = bands_to_json(spec.bands);
    j["n_samples"] = spec.n_samples;
    j["duration_s"] = spec.duration_s;
    j["snr_grid_db"] = spec.snr_grid_db;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["estimator_mode"] = to_string(spec.mode);
    j["model_order"] = spec.model_order;
    j["hankel"] = {{"q", spec.hankel.cols_index}};
    return j;
}

ExperimentSpec experiment_from_json(const json& j)
{
    std::string tag = "custom";
    MultipathChannel channel = [&]() {
        const auto& sc = j.at("scenario");
        if (sc.is_string()) {
            tag = sc.get<std::string>();
            return make_uwb_scenario(scenario_variant_from_string(tag));
        }
        return channel_from_json(sc);
    }();

    const int n = j.at("n_samples").get<int>();
    const int k = j.value("model_order", static_cast<int>(channel.num_paths()));
    auto bands = bands_from_json(j.at("bands"));

    double duration = j.value("duration_s", 0.0);
    if (duration <= 0.0)
        duration = n / (bands.front().bandwidth_rad / kTwoPi);

    HankelParams hankel;
    if (j.contains("hankel") && j["hankel"].contains("q")) {
        hankel.cols_index = j["hankel"]["q"].get<int>();
        hankel.rows = n - hankel.cols_index - 1;
        hankel.model_order = k;
        hankel.validate(n);
    } else {
        hankel = HankelParams::near_square(n, k);
    }

    ExperimentSpec spec{
        .label = j.value("label", std::string("experiment")),
        .scenario_tag = tag,
        .channel = std::move(channel),
        .bands = std::move(bands),
        .n_samples = n,
        .duration_s = duration,
        .snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>(),
        .trials = j.at("trials").get<int>(),
        .seed = j.at("seed").get<std::uint64_t>(),
        .mode = estimator_mode_from_string(
            j.value("estimator_mode", std::string("multiband-fine"))),
        .model_order = k,
        .hankel = hankel,
    };
    return spec;
}

std::vector<ExperimentSpec> experiments_from_config(const json& j)
{
    std::vector<ExperimentSpec> specs;
    if (j.contains("experiments")) {
        for (const auto& e : j["experiments"])
            specs.push_back(experiment_from_json(e));
    } else {
        specs.push_back(experiment_from_json(j));
    }
    return specs;
}

void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value)
{
    const auto as_int = [&]() { return std::stoi(value); };
    if (key == "trials") {
        spec.trials = as_int();
    } else if (key == "seed") {
        spec.seed = std::stoull(value);
    } else if (key == "n_samples") {
        spec.n_samples = as_int();
        spec.hankel = HankelParams::near_square(spec.n_samples, spec.model_order);
    } else if (key == "duration_s") {
        spec.duration_s = std::stod(value);
    } else if (key == "estimator_mode") {
        spec.mode = estimator_mode_from_string(value);
    } else if (key == "label") {
        spec.label = value;
    } else {
        throw std::invalid_argument("unknown override key: " + key);
    }
}

json result_metadata(const ResultTable& table, const ExperimentSpec& spec)
{
    json spec_json = experiment_to_json(spec);
    return {{"label", table.label},
            {"scenario", table.scenario_tag},
            {"seed", table.seed},
            {"trials", table.trials},
            {"version", table.version},
            {"spec_hash", fnv1a_hex(spec_json.dump())},
            {"spec", std::move(spec_json)}};
}

} // namespace mrtoa
