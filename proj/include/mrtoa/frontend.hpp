// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mrtoa/channel.hpp"

namespace mrtoa {

// Entries of known spectra below this magnitude are rejected (deconvolution
// would blow up the noise).
constexpr double kSpectrumFloor = 1e-9;

// A known training or receive-filter spectrum, evaluated on the N DFT bins
// of one band.
class Spectrum {
  public:
    static Spectrum flat(std::complex<double> value = {1.0, 0.0});
    static Spectrum from_samples(std::vector<std::complex<double>> samples);

    // Length-n vector of spectrum values; throws std::invalid_argument if
    // any entry has magnitude <= kSpectrumFloor or the stored sample count
    // does not match n.
    std::vector<std::complex<double>> sample(int n) const;

    bool is_flat() const { return samples_.empty(); }

  private:
    Spectrum() = default;
    std::complex<double> flat_value_{1.0, 0.0};
    std::vector<std::complex<double>> samples_; // empty => flat
};

// Observed DFT samples of one receiver branch together with the known
// training and filter spectra that produced them.
struct BandObservation {
    std::vector<std::complex<double>> x; // observed DFT samples
    std::vector<std::complex<double>> s; // training spectrum
    std::vector<std::complex<double>> g; // filter response
    BandConfig band{};
    int n_samples = 0;
    double duration_s = 0.0;
    double noise_variance = 0.0; // per-bin variance of the additive noise
};

struct BandEstimate {
    BandConfig band{};
    std::vector<std::complex<double>> h;  // deconvolved channel coefficients
    std::vector<double> noise_var_bins;   // per-bin post-deconvolution variance
};

// Per-band deconvolved channel-coefficient vectors sharing one DFT bin
// spacing delta_omega = 2*pi/T.
struct ChannelEstimateSet {
    std::vector<BandEstimate> bands; // centers strictly increasing
    double delta_omega = 0.0;        // rad/s
    double noise_variance = 0.0;     // pre-deconvolution sigma^2, shared
};

// Average per-DFT-bin signal power (1/N) sum |g*H*s|^2 for one band.
double mean_bin_power(const MultipathChannel& channel, const BandConfig& band, int n_samples,
                      double duration_s, const Spectrum& training = Spectrum::flat(),
                      const Spectrum& filter = Spectrum::flat());

// sigma^2 for a requested SNR given the average bin power; +inf SNR => 0.
double noise_variance_for_snr(double snr_db, double mean_power);

// One noisy band acquisition with explicit noise variance.
BandObservation simulate_observation_with_noise(const MultipathChannel& channel,
                                                const BandConfig& band, int n_samples,
                                                double duration_s, const Spectrum& training,
                                                const Spectrum& filter, double noise_variance,
                                                std::uint64_t seed);

// Same, with the noise variance derived from the requested SNR on this band.
BandObservation simulate_observation(const MultipathChannel& channel, const BandConfig& band,
                                     int n_samples, double duration_s, const Spectrum& training,
                                     const Spectrum& filter, double snr_db, std::uint64_t seed);

// Elementwise division by the known spectra: x[n] / (g[n]*s[n]).
std::vector<std::complex<double>> deconvolve(const BandObservation& obs);

// Full multiband acquisition with flat spectra: simulate every band with an
// independent derived seed, deconvolve, and record noise statistics. The
// noise variance is calibrated on band 1 and applied to all bands.
ChannelEstimateSet acquire_multiband(const MultipathChannel& channel,
                                     const std::vector<BandConfig>& bands, int n_samples,
                                     double duration_s, double snr_db, std::uint64_t seed);

ChannelEstimateSet acquire_multiband_with_noise(const MultipathChannel& channel,
                                                const std::vector<BandConfig>& bands,
                                                int n_samples, double duration_s,
                                                double noise_variance, std::uint64_t seed);

} // namespace mrtoa
