// SPDX-License-Identifier: Apache-2.0
#include "mrtoa/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace mrtoa {

namespace {
constexpr double kDelayTie = 1e-15;
}

MultipathChannel::MultipathChannel(std::vector<PathComponent> paths) : paths_(std::move(paths))
{
    if (paths_.empty())
        throw std::invalid_argument("MultipathChannel: need at least one path");
    for (const auto& p : paths_) {
        if (!(p.delay_s >= 0.0) || !std::isfinite(p.delay_s))
            throw std::invalid_argument("MultipathChannel: delays must be finite and non-negative");
        if (!std::isfinite(p.gain))
            throw std::invalid_argument("MultipathChannel: gains must be finite");
    }
    std::stable_sort(paths_.begin(), paths_.end(), [](const PathComponent& a, const PathComponent& b) {
        if (std::abs(a.delay_s - b.delay_s) > kDelayTie)
            return a.delay_s < b.delay_s;
        return std::abs(a.gain) > std::abs(b.gain);
    });
    for (std::size_t k = 1; k < paths_.size(); ++k) {
        if (!(paths_[k].delay_s > paths_[k - 1].delay_s))
            throw std::invalid_argument("MultipathChannel: delays must be distinct");
    }
}

void validate_bands(const std::vector<BandConfig>& bands)
{
    if (bands.empty())
        throw std::invalid_argument("bands: need at least one band");
    const double bw = bands.front().bandwidth_rad;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (!(bands[i].bandwidth_rad > 0.0))
            throw std::invalid_argument("band " + std::to_string(i + 1) + ": bandwidth must be positive");
        if (std::abs(bands[i].bandwidth_rad - bw) > 1e-9 * bw)
            throw std::invalid_argument("band " + std::to_string(i + 1) +
                                        ": all bands in a set must have equal bandwidth");
    }
    for (std::size_t i = 1; i < bands.size(); ++i) {
        if (!(bands[i].center_rad > bands[i - 1].center_rad))
            throw std::invalid_argument("bands " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                        ": centers must be strictly increasing");
        const double lo = bands[i].center_rad - 0.5 * bands[i].bandwidth_rad;
        const double hi = bands[i - 1].center_rad + 0.5 * bands[i - 1].bandwidth_rad;
        if (lo < hi)
            throw std::invalid_argument("bands " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                        " overlap");
    }
}

std::vector<std::complex<double>> evaluate_cfr(const MultipathChannel& channel,
                                               const std::vector<double>& freqs_rad)
{
    std::vector<std::complex<double>> out(freqs_rad.size());
    for (std::size_t m = 0; m < freqs_rad.size(); ++m) {
        std::complex<double> acc = 0.0;
        for (const auto& p : channel.paths())
            acc += p.gain * std::polar(1.0, -freqs_rad[m] * p.delay_s);
        out[m] = acc;
    }
    return out;
}

std::vector<std::complex<double>> band_channel_samples(const MultipathChannel& channel,
                                                       const BandConfig& band,
                                                       int n_samples,
                                                       double duration_s)
{
    if (n_samples < 2)
        throw std::invalid_argument("band_channel_samples: n_samples must be >= 2");
    if (!(duration_s > 0.0))
        throw std::invalid_argument("band_channel_samples: duration must be positive");
    if (channel.max_delay() >= duration_s)
        throw std::invalid_argument("band_channel_samples: all delays must be < duration (no-wrap guarantee)");

    const double omega_t = 2.0 * M_PI / duration_s;
    std::vector<double> freqs(static_cast<std::size_t>(n_samples));
    for (int n = 0; n < n_samples; ++n)
        freqs[static_cast<std::size_t>(n)] = band.center_rad + n * omega_t;
    return evaluate_cfr(channel, freqs);
}

ScenarioVariant scenario_variant_from_string(const std::string& tag)
{
    if (tag == "S1") return ScenarioVariant::S1;
    if (tag == "S2") return ScenarioVariant::S2;
    if (tag == "S3") return ScenarioVariant::S3;
    if (tag == "S4") return ScenarioVariant::S4;
    if (tag == "S5") return ScenarioVariant::S5;
    if (tag == "default") return ScenarioVariant::Default;
    throw std::invalid_argument("unknown scenario variant: " + tag);
}

std::string to_string(ScenarioVariant v)
{
    switch (v) {
        case ScenarioVariant::S1: return "S1";
        case ScenarioVariant::S2: return "S2";
        case ScenarioVariant::S3: return "S3";
        case ScenarioVariant::S4: return "S4";
        case ScenarioVariant::S5: return "S5";
        case ScenarioVariant::Default: return "default";
    }
    throw std::invalid_argument("unknown scenario variant");
}

MultipathChannel make_uwb_scenario(ScenarioVariant variant, const ScenarioOptions& opt)
{
    constexpr int kPaths = 8;
    // tap offsets of the S3 baseline, in grid steps from the LOS path
    const std::array<double, kPaths> taps{0, 1, 2, 4, 6, 9, 12, 16};

    double spacing_mult = 1.0; // applied to the LOS->2nd and LOS->3rd spacings
    double power_mult = 1.0;   // applied to the 2nd and 3rd tap powers
    switch (variant) {
        case ScenarioVariant::S1: power_mult = 2.0; break;
        case ScenarioVariant::S2: power_mult = 1.5; break;
        case ScenarioVariant::S3:
        case ScenarioVariant::Default: break;
        case ScenarioVariant::S4: spacing_mult = 2.0; break;
        case ScenarioVariant::S5: spacing_mult = 3.0; break;
    }

    // Stretch the 2nd and 3rd tap offsets; shift the later cluster by the
    // same amount so delays stay distinct and ordered.
    std::array<double, kPaths> offsets = taps;
    offsets[1] = taps[1] * spacing_mult;
    offsets[2] = taps[2] * spacing_mult;
    const double tail_shift = offsets[2] - taps[2];
    for (int k = 3; k < kPaths; ++k)
        offsets[static_cast<std::size_t>(k)] = taps[static_cast<std::size_t>(k)] + tail_shift;

    // Powers: LOS = 8x the 2nd tap; geometric decay after the 2nd tap;
    // the 2nd/3rd multipliers are applied relative to that baseline.
    std::array<double, kPaths> power{};
    power[0] = 8.0;
    for (int k = 1; k < kPaths; ++k)
        power[static_cast<std::size_t>(k)] = std::pow(opt.tail_power_ratio, k - 1);
    power[1] *= power_mult;
    power[2] *= power_mult;

    std::vector<PathComponent> paths;
    paths.reserve(kPaths);
    for (int k = 0; k < kPaths; ++k) {
        paths.push_back({std::sqrt(power[static_cast<std::size_t>(k)]),
                         opt.toa_s + offsets[static_cast<std::size_t>(k)] * opt.grid_step_s});
    }
    return MultipathChannel(std::move(paths));
}

} // namespace mrtoa
