// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mrtoa/bench.hpp"
#include "mrtoa/json_io.hpp"

using namespace mrtoa;

namespace {
ExperimentSpec small_spec()
{
    auto spec = default_experiment();
    spec.trials = 5;
    spec.snr_grid_db = {20.0, 30.0};
    return spec;
}
} // namespace

TEST_CASE("degenerate Monte Carlo: one noiseless trial nails the TOA")
{
    auto spec = small_spec();
    spec.label = "degenerate";
    spec.scenario_tag = "custom";
    spec.channel = MultipathChannel({{1.0, 20e-9}, {0.6, 95e-9}, {0.3, 210e-9}});
    spec.model_order = 3;
    spec.hankel = HankelParams::near_square(spec.n_samples, 3);
    spec.trials = 1;
    spec.snr_grid_db = {std::numeric_limits<double>::infinity()}; // noiseless
    const auto table = run_experiment(spec);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].failures == 0);
    CHECK(table.rows[0].rmse_toa_s < 1e-8 * spec.channel.toa());
}

TEST_CASE("same spec and seed produce a bit-identical table")
{
    const auto spec = small_spec();
    const auto a = run_experiment(spec);
    const auto b = run_experiment(spec);
    CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("rows carry the scenario tag and a non-negative RMSE")
{
    const auto table = run_experiment(small_spec());
    for (const auto& row : table.rows) {
        CHECK(row.rmse_toa_s >= 0.0);
        CHECK(row.crlb_rmse_s > 0.0);
        CHECK(row.scenario == "default");
    }
}

TEST_CASE("fig2a preset: three specs differing only in bandwidth")
{
    const auto specs = preset_experiments("fig2a");
    REQUIRE(specs.size() == 3);
    for (const auto& s : specs) {
        CHECK(s.scenario_tag == "default");
        CHECK(s.bands.size() == 2);
        s.validate();
    }
    CHECK(specs[0].bands[0].bandwidth_rad < specs[1].bands[0].bandwidth_rad);
    CHECK(specs[1].bands[0].bandwidth_rad < specs[2].bands[0].bandwidth_rad);
}

TEST_CASE("fig2b preset: four apertures with identical bandwidth")
{
    const auto specs = preset_experiments("fig2b");
    REQUIRE(specs.size() == 4);
    double prev = 0.0;
    for (const auto& s : specs) {
        const double aperture = s.bands[1].center_rad - s.bands[0].center_rad;
        CHECK(aperture > prev);
        prev = aperture;
        s.validate();
    }
}

TEST_CASE("fig2c preset: five scenarios sharing the band layout")
{
    const auto specs = preset_experiments("fig2c");
    REQUIRE(specs.size() == 5);
    for (const auto& s : specs) {
        CHECK(s.bands[0].center_rad == specs[0].bands[0].center_rad);
        CHECK(s.bands[1].center_rad == specs[0].bands[1].center_rad);
        s.validate();
    }
    CHECK(specs[0].scenario_tag == "S1");
    CHECK(specs[4].scenario_tag == "S5");
}

TEST_CASE("presets round-trip through JSON losslessly")
{
    for (const char* tag : {"fig2a", "fig2b", "fig2c"}) {
        for (const auto& spec : preset_experiments(tag)) {
            const auto j = experiment_to_json(spec);
            const auto back = experiment_from_json(j);
            CHECK(experiment_to_json(back) == j);
        }
    }
}

TEST_CASE("unknown preset tag throws")
{
    CHECK_THROWS_AS(preset_experiments("fig9z"), std::invalid_argument);
}

TEST_CASE("spec validation rejects bad Monte Carlo setups")
{
    auto spec = small_spec();
    spec.trials = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = small_spec();
    spec.snr_grid_db = {10.0, 10.0};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
