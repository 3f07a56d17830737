// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mrtoa/channel.hpp"
#include "mrtoa/json_io.hpp"

using namespace mrtoa;
using cd = std::complex<double>;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

// Direct summation with long double accumulation, independent of the
// library path.
cd direct_sum(const std::vector<PathComponent>& paths, double omega)
{
    long double re = 0.0L, im = 0.0L;
    for (const auto& p : paths) {
        re += p.gain * std::cos(static_cast<long double>(-omega * p.delay_s));
        im += p.gain * std::sin(static_cast<long double>(-omega * p.delay_s));
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}
} // namespace

TEST_CASE("cfr: zero-delay single path is identically one")
{
    const MultipathChannel ch({{1.0, 0.0}});
    const auto out = evaluate_cfr(ch, {0.0, 1e9, kTwoPi * 3.7e9});
    for (const auto& v : out) {
        CHECK(v.real() == 1.0);
        CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("cfr: full-cycle phase returns the gain")
{
    const MultipathChannel ch({{2.0, 1e-9}});
    const auto out = evaluate_cfr(ch, {kTwoPi * 1e9});
    CHECK(std::abs(out[0] - cd{2.0, 0.0}) < 1e-12);
}

TEST_CASE("cfr: two-path value matches direct-sum oracle")
{
    const std::vector<PathComponent> paths{{1.0, 10e-9}, {0.5, 25e-9}};
    const MultipathChannel ch(paths);
    const double omega = kTwoPi * 1e8;
    const auto out = evaluate_cfr(ch, {omega});
    const cd expect = direct_sum(paths, omega);
    CHECK(std::abs(out[0] - expect) / std::abs(expect) < 1e-12);
}

TEST_CASE("cfr: linearity in the gains is exact")
{
    const std::vector<double> freqs{0.0, kTwoPi * 1e8, kTwoPi * 2.3e9};
    const MultipathChannel ch({{1.0, 5e-9}, {0.25, 18e-9}});
    const MultipathChannel scaled({{3.0, 5e-9}, {0.75, 18e-9}});
    const auto a = evaluate_cfr(ch, freqs);
    const auto b = evaluate_cfr(scaled, freqs);
    for (std::size_t i = 0; i < freqs.size(); ++i)
        CHECK(std::abs(b[i] - 3.0 * a[i]) <= 1e-14 * (1.0 + std::abs(b[i])));
}

TEST_CASE("cfr: superposition over single-path channels")
{
    const std::vector<PathComponent> paths{{1.0, 3e-9}, {0.8, 11e-9}, {0.3, 24e-9}};
    const std::vector<double> freqs{kTwoPi * 4e9, kTwoPi * 4.1e9, kTwoPi * 5e9};
    const auto full = evaluate_cfr(MultipathChannel(paths), freqs);
    std::vector<cd> sum(freqs.size(), 0.0);
    for (const auto& p : paths) {
        const auto one = evaluate_cfr(MultipathChannel({p}), freqs);
        for (std::size_t i = 0; i < freqs.size(); ++i)
            sum[i] += one[i];
    }
    for (std::size_t i = 0; i < freqs.size(); ++i)
        CHECK(std::abs(full[i] - sum[i]) < 3 * 1e-13);
}

TEST_CASE("cfr: conjugate symmetry for real gains")
{
    const MultipathChannel ch({{1.0, 7e-9}, {-0.6, 19e-9}});
    for (double f : {1e8, 3.3e9, 7.77e9}) {
        const auto pos = evaluate_cfr(ch, {kTwoPi * f});
        const auto neg = evaluate_cfr(ch, {-kTwoPi * f});
        CHECK(std::abs(neg[0] - std::conj(pos[0])) < 1e-14);
    }
}

TEST_CASE("band samples: zero-center zero-delay gives all ones")
{
    const MultipathChannel ch({{1.0, 0.0}});
    const auto out = band_channel_samples(ch, {0.0, kTwoPi * 1e8}, 16, 1e-6);
    for (const auto& v : out)
        CHECK(v == cd{1.0, 0.0});
}

TEST_CASE("band samples: consistent with evaluate_cfr on the bin grid")
{
    const MultipathChannel ch = make_uwb_scenario(ScenarioVariant::Default);
    const BandConfig band{kTwoPi * 4e9, kTwoPi * 200e6};
    const int n = 64;
    const double duration = n / 200e6;
    const auto samples = band_channel_samples(ch, band, n, duration);
    std::vector<double> freqs;
    for (int m = 0; m < n; ++m)
        freqs.push_back(band.center_rad + m * kTwoPi / duration);
    const auto cfr = evaluate_cfr(ch, freqs);
    for (int m = 0; m < n; ++m) {
        const auto& s = samples[static_cast<std::size_t>(m)];
        const auto& c = cfr[static_cast<std::size_t>(m)];
        CHECK(std::abs(s - c) < 1e-12 * std::abs(c));
    }
}

TEST_CASE("band samples: matches direct-sum oracle")
{
    const auto ch = make_uwb_scenario(ScenarioVariant::Default);
    const BandConfig band{kTwoPi * 4e9, kTwoPi * 200e6};
    const int n = 64;
    const double duration = n / 200e6;
    const auto samples = band_channel_samples(ch, band, n, duration);
    for (int m = 0; m < n; m += 7) {
        const cd expect = direct_sum(ch.paths(), band.center_rad + m * kTwoPi / duration);
        CHECK(std::abs(samples[static_cast<std::size_t>(m)] - expect) / std::abs(expect) < 1e-12);
    }
}

TEST_CASE("band samples: rejects delays at or beyond the duration")
{
    const MultipathChannel ch({{1.0, 2e-7}});
    CHECK_THROWS_AS(band_channel_samples(ch, {0.0, kTwoPi * 1e8}, 16, 2e-7),
                    std::invalid_argument);
}

TEST_CASE("channel: invalid constructions are rejected")
{
    CHECK_THROWS_AS(MultipathChannel({}), std::invalid_argument);
    CHECK_THROWS_AS(MultipathChannel({{1.0, -1e-9}}), std::invalid_argument);
    CHECK_THROWS_AS(MultipathChannel({{1.0, 5e-9}, {0.5, 5e-9}}), std::invalid_argument);
}

TEST_CASE("channel: paths are stored sorted regardless of input order")
{
    const MultipathChannel a({{1.0, 10e-9}, {0.5, 25e-9}, {0.2, 5e-9}});
    const MultipathChannel b({{0.2, 5e-9}, {0.5, 25e-9}, {1.0, 10e-9}});
    REQUIRE(a.num_paths() == b.num_paths());
    for (std::size_t k = 0; k < a.num_paths(); ++k) {
        CHECK(a.paths()[k].delay_s == b.paths()[k].delay_s);
        CHECK(a.paths()[k].gain == b.paths()[k].gain);
    }
    CHECK(a.toa() == 5e-9);
}

TEST_CASE("scenario: default has 8 paths with the 8x LOS power ratio")
{
    const auto ch = make_uwb_scenario(ScenarioVariant::Default);
    REQUIRE(ch.num_paths() == 8);
    const double g1 = ch.paths()[0].gain;
    const double g2 = ch.paths()[1].gain;
    CHECK(g1 * g1 / (g2 * g2) == doctest::Approx(8.0).epsilon(1e-12));
    for (std::size_t k = 1; k < 8; ++k)
        CHECK(ch.paths()[k].delay_s > ch.paths()[k - 1].delay_s);
}

TEST_CASE("scenario: S1 doubles the second-tap power relative to S3")
{
    const auto s1 = make_uwb_scenario(ScenarioVariant::S1);
    const auto s3 = make_uwb_scenario(ScenarioVariant::S3);
    const double p2_s1 = s1.paths()[1].gain * s1.paths()[1].gain;
    const double p2_s3 = s3.paths()[1].gain * s3.paths()[1].gain;
    CHECK(p2_s1 == doctest::Approx(2.0 * p2_s3).epsilon(1e-12));
}

TEST_CASE("scenario: S4 doubles the LOS-to-second spacing relative to S3")
{
    const auto s4 = make_uwb_scenario(ScenarioVariant::S4);
    const auto s3 = make_uwb_scenario(ScenarioVariant::S3);
    const double d_s4 = s4.paths()[1].delay_s - s4.paths()[0].delay_s;
    const double d_s3 = s3.paths()[1].delay_s - s3.paths()[0].delay_s;
    CHECK(d_s4 == doctest::Approx(2.0 * d_s3).epsilon(1e-12));
}

TEST_CASE("scenario: unknown variant tag throws")
{
    CHECK_THROWS_AS(scenario_variant_from_string("S9"), std::invalid_argument);
}

TEST_CASE("channel JSON round trip uses normative field names")
{
    const auto ch = make_uwb_scenario(ScenarioVariant::S2);
    const auto j = channel_to_json(ch);
    REQUIRE(j.contains("paths"));
    CHECK(j["paths"][0].contains("gain"));
    CHECK(j["paths"][0].contains("delay_s"));
    const auto back = channel_from_json(j);
    REQUIRE(back.num_paths() == ch.num_paths());
    for (std::size_t k = 0; k < ch.num_paths(); ++k) {
        CHECK(back.paths()[k].gain == ch.paths()[k].gain);
        CHECK(back.paths()[k].delay_s == ch.paths()[k].delay_s);
    }
}

TEST_CASE("band validation names offending bands")
{
    std::vector<BandConfig> overlap{{kTwoPi * 4e9, kTwoPi * 500e6}, {kTwoPi * 4.2e9, kTwoPi * 500e6}};
    CHECK_THROWS_WITH_AS(validate_bands(overlap), "bands 1 and 2 overlap", std::invalid_argument);
    std::vector<BandConfig> unequal{{kTwoPi * 4e9, kTwoPi * 200e6}, {kTwoPi * 5e9, kTwoPi * 300e6}};
    CHECK_THROWS_AS(validate_bands(unequal), std::invalid_argument);
}
