// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "mrtoa/channel.hpp"
#include "mrtoa/frontend.hpp"
#include "mrtoa/rng.hpp"

using namespace mrtoa;
using cd = std::complex<double>;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kInf = std::numeric_limits<double>::infinity();

MultipathChannel test_channel()
{
    return MultipathChannel({{1.0, 12e-9}, {0.5, 31e-9}});
}

const BandConfig kBand{kTwoPi * 4e9, kTwoPi * 200e6};
constexpr int kN = 32;
constexpr double kT = kN / 200e6;
} // namespace

TEST_CASE("noiseless flat observation equals the channel samples exactly")
{
    const auto ch = test_channel();
    const auto obs = simulate_observation(ch, kBand, kN, kT, Spectrum::flat(), Spectrum::flat(),
                                          kInf, 42);
    const auto h = band_channel_samples(ch, kBand, kN, kT);
    for (int n = 0; n < kN; ++n)
        CHECK(obs.x[static_cast<std::size_t>(n)] == h[static_cast<std::size_t>(n)]);
}

TEST_CASE("identical seeds reproduce the observation bit for bit")
{
    const auto ch = test_channel();
    const auto a = simulate_observation(ch, kBand, kN, kT, Spectrum::flat(), Spectrum::flat(),
                                        20.0, 7);
    const auto b = simulate_observation(ch, kBand, kN, kT, Spectrum::flat(), Spectrum::flat(),
                                        20.0, 7);
    const auto c = simulate_observation(ch, kBand, kN, kT, Spectrum::flat(), Spectrum::flat(),
                                        20.0, 8);
    bool identical = true, differs = false;
    for (int n = 0; n < kN; ++n) {
        identical = identical && a.x[static_cast<std::size_t>(n)] == b.x[static_cast<std::size_t>(n)];
        differs = differs || a.x[static_cast<std::size_t>(n)] != c.x[static_cast<std::size_t>(n)];
    }
    CHECK(identical);
    CHECK(differs);
    // different seeds differ in the noise only
    const auto h = band_channel_samples(ch, kBand, kN, kT);
    for (int n = 0; n < kN; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const cd na = a.x[i] - h[i];
        const cd nc = c.x[i] - h[i];
        CHECK(std::abs(na) < 10 * std::sqrt(a.noise_variance));
        CHECK(std::abs(nc) < 10 * std::sqrt(c.noise_variance));
    }
}

TEST_CASE("noiseless observation scales linearly with the training spectrum")
{
    const auto ch = test_channel();
    const auto base = simulate_observation(ch, kBand, kN, kT, Spectrum::flat(), Spectrum::flat(),
                                           kInf, 0);
    const auto scaled = simulate_observation(ch, kBand, kN, kT, Spectrum::flat({2.0, 0.0}),
                                             Spectrum::flat(), kInf, 0);
    for (int n = 0; n < kN; ++n)
        CHECK(scaled.x[static_cast<std::size_t>(n)] == 2.0 * base.x[static_cast<std::size_t>(n)]);
}

TEST_CASE("deconvolve with unit spectra is the identity")
{
    const auto ch = test_channel();
    const auto obs = simulate_observation(ch, kBand, kN, kT, Spectrum::flat(), Spectrum::flat(),
                                          15.0, 3);
    const auto h = deconvolve(obs);
    for (int n = 0; n < kN; ++n)
        CHECK(h[static_cast<std::size_t>(n)] == obs.x[static_cast<std::size_t>(n)]);
}

TEST_CASE("noiseless deconvolution recovers the true channel for any nonzero spectra")
{
    const auto ch = test_channel();
    std::vector<cd> s(kN), g(kN);
    for (int n = 0; n < kN; ++n) {
        s[static_cast<std::size_t>(n)] = std::polar(1.0 + 0.3 * n / kN, 0.1 * n);
        g[static_cast<std::size_t>(n)] = std::polar(0.7, -0.05 * n * n / kN);
    }
    const auto obs = simulate_observation(ch, kBand, kN, kT, Spectrum::from_samples(s),
                                          Spectrum::from_samples(g), kInf, 0);
    const auto h = deconvolve(obs);
    const auto truth = band_channel_samples(ch, kBand, kN, kT);
    for (int n = 0; n < kN; ++n) {
        const auto i = static_cast<std::size_t>(n);
        CHECK(std::abs(h[i] - truth[i]) / std::abs(truth[i]) < 1e-12);
    }
}

TEST_CASE("pure-phase training spectrum is corrected by deconvolution")
{
    const auto ch = test_channel();
    std::vector<cd> s(kN);
    for (int n = 0; n < kN; ++n)
        s[static_cast<std::size_t>(n)] = std::polar(1.0, static_cast<double>(n));
    const auto obs = simulate_observation(ch, kBand, kN, kT, Spectrum::from_samples(s),
                                          Spectrum::flat(), kInf, 0);
    const auto h = deconvolve(obs);
    const auto truth = band_channel_samples(ch, kBand, kN, kT);
    for (int n = 0; n < kN; ++n) {
        const auto i = static_cast<std::size_t>(n);
        CHECK(std::abs(h[i] - truth[i]) < 1e-12);
    }
}

TEST_CASE("spectra too close to zero are rejected")
{
    CHECK_THROWS_AS(Spectrum::flat({0.0, 0.0}).sample(4), std::invalid_argument);
    std::vector<cd> s(kN, cd{1.0, 0.0});
    s[5] = 1e-12;
    CHECK_THROWS_AS(Spectrum::from_samples(s).sample(kN), std::invalid_argument);
}

TEST_CASE("single-band acquisition composes simulate + deconvolve")
{
    const auto ch = test_channel();
    const std::vector<BandConfig> bands{kBand};
    const auto set = acquire_multiband(ch, bands, kN, kT, 25.0, 99);
    REQUIRE(set.bands.size() == 1);
    const double p = mean_bin_power(ch, kBand, kN, kT);
    const double sigma2 = noise_variance_for_snr(25.0, p);
    const auto obs = simulate_observation_with_noise(ch, kBand, kN, kT, Spectrum::flat(),
                                                     Spectrum::flat(), sigma2,
                                                     derive_seed(99, 0));
    const auto h = deconvolve(obs);
    for (int n = 0; n < kN; ++n)
        CHECK(set.bands[0].h[static_cast<std::size_t>(n)] == h[static_cast<std::size_t>(n)]);
}

TEST_CASE("two-band noiseless single-path ratio is the aperture phasor")
{
    const MultipathChannel ch({{1.0, 17e-9}});
    const std::vector<BandConfig> bands{{kTwoPi * 4e9, kTwoPi * 200e6},
                                        {kTwoPi * 5e9, kTwoPi * 200e6}};
    const auto set = acquire_multiband(ch, bands, kN, kT, kInf, 0);
    const cd expect = std::polar(1.0, -(bands[1].center_rad - bands[0].center_rad) * 17e-9);
    for (int n = 0; n < kN; ++n) {
        const auto i = static_cast<std::size_t>(n);
        CHECK(std::abs(set.bands[1].h[i] / set.bands[0].h[i] - expect) < 1e-12);
    }
}

TEST_CASE("noise after flat deconvolution is white")
{
    const auto ch = test_channel();
    const int n = 8;
    const double t = n / 200e6;
    const double sigma2 = 0.5;
    const int trials = 2000;
    const auto truth = band_channel_samples(ch, kBand, n, t);

    // sample covariance of the post-deconvolution noise
    std::vector<std::vector<cd>> noise(static_cast<std::size_t>(trials));
    for (int tr = 0; tr < trials; ++tr) {
        const auto set = acquire_multiband_with_noise(ch, {kBand}, n, t, sigma2,
                                                      static_cast<std::uint64_t>(tr));
        auto& row = noise[static_cast<std::size_t>(tr)];
        row.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            row[static_cast<std::size_t>(i)] =
                set.bands[0].h[static_cast<std::size_t>(i)] - truth[static_cast<std::size_t>(i)];
    }
    const double bound = 5.0 * sigma2 / std::sqrt(static_cast<double>(trials));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cd acc = 0.0;
            for (const auto& row : noise)
                acc += row[static_cast<std::size_t>(i)] * std::conj(row[static_cast<std::size_t>(j)]);
            acc /= static_cast<double>(trials);
            if (i == j)
                CHECK(std::abs(acc - sigma2) < bound);
            else
                CHECK(std::abs(acc) < bound);
        }
    }
}

TEST_CASE("empirical per-bin SNR matches the request within 0.1 dB")
{
    const auto ch = test_channel();
    const int n = 16;
    const double t = n / 200e6;
    const double snr_db = 20.0;
    const double p = mean_bin_power(ch, kBand, n, t);
    const auto truth = band_channel_samples(ch, kBand, n, t);

    double noise_power = 0.0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) {
        const auto obs = simulate_observation(ch, kBand, n, t, Spectrum::flat(), Spectrum::flat(),
                                              snr_db, static_cast<std::uint64_t>(s));
        for (int i = 0; i < n; ++i)
            noise_power += std::norm(obs.x[static_cast<std::size_t>(i)] -
                                     truth[static_cast<std::size_t>(i)]);
    }
    noise_power /= static_cast<double>(seeds) * n;
    const double snr_emp_db = 10.0 * std::log10(p / noise_power);
    CHECK(std::abs(snr_emp_db - snr_db) < 0.1);
}
