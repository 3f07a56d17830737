// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace mrtoa {

struct PathComponent {
    double gain;    // linear amplitude, dimensionless
    double delay_s; // propagation delay, seconds, >= 0
};

// Sparse multipath channel: a finite sum of attenuated, delayed Diracs.
// Paths are stored sorted by delay ascending; path 1 is the line of sight.
class MultipathChannel {
  public:
    // Sorts the paths by delay (ties broken by gain magnitude descending)
    // and validates that all delays are non-negative and distinct.
    explicit MultipathChannel(std::vector<PathComponent> paths);

    const std::vector<PathComponent>& paths() const { return paths_; }
    std::size_t num_paths() const { return paths_.size(); }
    double toa() const { return paths_.front().delay_s; }
    double max_delay() const { return paths_.back().delay_s; }

  private:
    std::vector<PathComponent> paths_;
};

// One acquisition sub-band.
struct BandConfig {
    double center_rad;    // center angular frequency, rad/s
    double bandwidth_rad; // bandwidth, rad/s, > 0
};

// Checks bandwidth positivity, equal bandwidths, strictly increasing
// centers and non-overlap. Throws std::invalid_argument naming the
// offending bands.
void validate_bands(const std::vector<BandConfig>& bands);

// Exact channel frequency response at arbitrary angular frequencies:
// element m is sum_k gain_k * exp(-j * freqs[m] * delay_k).
std::vector<std::complex<double>> evaluate_cfr(const MultipathChannel& channel,
                                               const std::vector<double>& freqs_rad);

// DFT-domain channel coefficients of one sub-band:
// entry n = sum_k gain_k * exp(-j*center*delay_k) * exp(-j*n*(2*pi/T)*delay_k).
// Requires every delay < duration_s (no-wrap guarantee) and n_samples >= 2.
std::vector<std::complex<double>> band_channel_samples(const MultipathChannel& channel,
                                                       const BandConfig& band,
                                                       int n_samples,
                                                       double duration_s);

// Benchmark channel with eight dominant multipath components on a 3 GHz
// tap grid; the line-of-sight path carries 8x the power of the second.
enum class ScenarioVariant { S1, S2, S3, S4, S5, Default };

ScenarioVariant scenario_variant_from_string(const std::string& tag);
std::string to_string(ScenarioVariant v);

struct ScenarioOptions {
    double toa_s = 20.3e-9;            // delay of the line-of-sight path
    double grid_step_s = 1.0 / 3.0e9;  // tap grid, 333.33 ps
    double tail_power_ratio = 0.7;     // per-tap power decay after path 2
};

MultipathChannel make_uwb_scenario(ScenarioVariant variant, const ScenarioOptions& opt = {});

} // namespace mrtoa
