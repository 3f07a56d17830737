// SPDX-License-Identifier: Apache-2.0
#include "mrtoa/frontend.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mrtoa/rng.hpp"

namespace mrtoa {

Spectrum Spectrum::flat(std::complex<double> value)
{
    Spectrum s;
    s.flat_value_ = value;
    return s;
}

Spectrum Spectrum::from_samples(std::vector<std::complex<double>> samples)
{
    if (samples.empty())
        throw std::invalid_argument("Spectrum: sample vector must be non-empty");
    Spectrum s;
    s.samples_ = std::move(samples);
    return s;
}

std::vector<std::complex<double>> Spectrum::sample(int n) const
{
    if (n <= 0)
        throw std::invalid_argument("Spectrum: n must be positive");
    std::vector<std::complex<double>> out;
    if (samples_.empty()) {
        if (std::abs(flat_value_) <= kSpectrumFloor)
            throw std::invalid_argument("Spectrum: flat value too close to zero");
        out.assign(static_cast<std::size_t>(n), flat_value_);
    } else {
        if (samples_.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("Spectrum: stored sample count does not match n");
        for (const auto& v : samples_)
            if (std::abs(v) <= kSpectrumFloor)
                throw std::invalid_argument("Spectrum: entry too close to zero");
        out = samples_;
    }
    return out;
}

double mean_bin_power(const MultipathChannel& channel, const BandConfig& band, int n_samples,
                      double duration_s, const Spectrum& training, const Spectrum& filter)
{
    const auto h = band_channel_samples(channel, band, n_samples, duration_s);
    const auto s = training.sample(n_samples);
    const auto g = filter.sample(n_samples);
    double acc = 0.0;
    for (int n = 0; n < n_samples; ++n) {
        const auto i = static_cast<std::size_t>(n);
        acc += std::norm(g[i] * h[i] * s[i]);
    }
    return acc / n_samples;
}

double noise_variance_for_snr(double snr_db, double mean_power)
{
    if (std::isinf(snr_db) && snr_db > 0.0)
        return 0.0;
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("snr_db must be finite or +inf");
    return mean_power / std::pow(10.0, snr_db / 10.0);
}

BandObservation simulate_observation_with_noise(const MultipathChannel& channel,
                                                const BandConfig& band, int n_samples,
                                                double duration_s, const Spectrum& training,
                                                const Spectrum& filter, double noise_variance,
                                                std::uint64_t seed)
{
    if (noise_variance < 0.0)
        throw std::invalid_argument("noise_variance must be non-negative");
    BandObservation obs;
    obs.band = band;
    obs.n_samples = n_samples;
    obs.duration_s = duration_s;
    obs.noise_variance = noise_variance;
    obs.s = training.sample(n_samples);
    obs.g = filter.sample(n_samples);

    const auto h = band_channel_samples(channel, band, n_samples, duration_s);
    obs.x.resize(static_cast<std::size_t>(n_samples));
    gaussian_rng rng(seed);
    for (int n = 0; n < n_samples; ++n) {
        const auto i = static_cast<std::size_t>(n);
        std::complex<double> w = 0.0;
        if (noise_variance > 0.0)
            w = rng.complex_normal(noise_variance);
        obs.x[i] = obs.g[i] * h[i] * obs.s[i] + w;
    }
    return obs;
}

BandObservation simulate_observation(const MultipathChannel& channel, const BandConfig& band,
                                     int n_samples, double duration_s, const Spectrum& training,
                                     const Spectrum& filter, double snr_db, std::uint64_t seed)
{
    const double p = mean_bin_power(channel, band, n_samples, duration_s, training, filter);
    return simulate_observation_with_noise(channel, band, n_samples, duration_s, training, filter,
                                           noise_variance_for_snr(snr_db, p), seed);
}

std::vector<std::complex<double>> deconvolve(const BandObservation& obs)
{
    const auto n = obs.x.size();
    if (obs.s.size() != n || obs.g.size() != n)
        throw std::invalid_argument("deconvolve: x, s, g must have equal length");
    std::vector<std::complex<double>> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> d = obs.g[i] * obs.s[i];
        if (std::abs(d) <= kSpectrumFloor)
            throw std::invalid_argument("deconvolve: |g*s| too close to zero at bin " +
                                        std::to_string(i));
        h[i] = obs.x[i] / d;
    }
    return h;
}

ChannelEstimateSet acquire_multiband_with_noise(const MultipathChannel& channel,
                                                const std::vector<BandConfig>& bands,
                                                int n_samples, double duration_s,
                                                double noise_variance, std::uint64_t seed)
{
    validate_bands(bands);
    const Spectrum flat = Spectrum::flat();
    ChannelEstimateSet set;
    set.delta_omega = 2.0 * M_PI / duration_s;
    set.noise_variance = noise_variance;
    set.bands.reserve(bands.size());
    for (std::size_t i = 0; i < bands.size(); ++i) {
        // Independent noise per RF chain; deterministic child seeds.
        const auto obs = simulate_observation_with_noise(channel, bands[i], n_samples, duration_s,
                                                         flat, flat, noise_variance,
                                                         derive_seed(seed, i));
        BandEstimate est;
        est.band = bands[i];
        est.h = deconvolve(obs);
        est.noise_var_bins.resize(est.h.size());
        for (std::size_t n = 0; n < est.h.size(); ++n)
            est.noise_var_bins[n] = noise_variance / std::norm(obs.g[n] * obs.s[n]);
        set.bands.push_back(std::move(est));
    }
    return set;
}

ChannelEstimateSet acquire_multiband(const MultipathChannel& channel,
                                     const std::vector<BandConfig>& bands, int n_samples,
                                     double duration_s, double snr_db, std::uint64_t seed)
{
    validate_bands(bands);
    const double p = mean_bin_power(channel, bands.front(), n_samples, duration_s);
    return acquire_multiband_with_noise(channel, bands, n_samples, duration_s,
                                        noise_variance_for_snr(snr_db, p), seed);
}

} // namespace mrtoa
