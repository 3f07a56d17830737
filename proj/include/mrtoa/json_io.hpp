// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "mrtoa/bench.hpp"
#include "mrtoa/channel.hpp"

namespace mrtoa {

// Channel scenarios: {"paths":[{"gain":float,"delay_s":float}, ...]}.
nlohmann::json channel_to_json(const MultipathChannel& channel);
MultipathChannel channel_from_json(const nlohmann::json& j);

// Bands: [{"center_hz":float,"bandwidth_hz":float}, ...]. Frequencies are
// Hz on disk and rad/s in memory; the conversion happens here only.
nlohmann::json bands_to_json(const std::vector<BandConfig>& bands);
std::vector<BandConfig> bands_from_json(const nlohmann::json& j);

// Full experiment spec. "scenario" is either a preset tag string or an
// inline channel object.
nlohmann::json experiment_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const nlohmann::json& j);

// A config file holds either a single experiment object or
// {"experiments":[...]}.
std::vector<ExperimentSpec> experiments_from_config(const nlohmann::json& j);

// key=value overrides for declared scalar spec fields; unknown keys throw.
void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value);

nlohmann::json result_metadata(const ResultTable& table, const ExperimentSpec& spec);

} // namespace mrtoa
