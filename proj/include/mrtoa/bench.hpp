// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrtoa/channel.hpp"
#include "mrtoa/estimator.hpp"

namespace mrtoa {

enum class EstimatorMode { SingleBand, MultibandFine, MultibandWeighted };

EstimatorMode estimator_mode_from_string(const std::string& s);
std::string to_string(EstimatorMode m);

// One seeded Monte Carlo experiment: a channel scenario, an acquisition
// setup, an SNR grid, and an estimator configuration.
struct ExperimentSpec {
    std::string label = "experiment";
    std::string scenario_tag = "default"; // preset tag, or "custom"
    MultipathChannel channel;
    std::vector<BandConfig> bands;
    int n_samples = 0;
    double duration_s = 0.0;
    std::vector<double> snr_grid_db;
    int trials = 1;
    std::uint64_t seed = 0;
    EstimatorMode mode = EstimatorMode::MultibandFine;
    int model_order = 0;
    HankelParams hankel;

    void validate() const;
};

struct ResultRow {
    double snr_db = 0.0;
    double rmse_toa_s = 0.0;
    double crlb_rmse_s = 0.0;
    int failures = 0;
    std::string scenario;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::string label;
    std::string scenario_tag;
    std::uint64_t seed = 0;
    int trials = 0;
    std::string spec_hash;    // FNV-1a of the serialized spec
    std::string version = "mrtoa-1.0.0";

    // CSV body with header snr_db,rmse_toa_s,crlb_rmse_s,failures,scenario.
    std::string to_csv() const;
};

// Per-trial diagnostics used by the statistical property checks.
struct TrialStats {
    std::vector<double> fine_toa_s;   // unflagged trials, final (fine) TOA
    std::vector<double> coarse_toa_s; // same trials, coarse-only TOA
    std::vector<long> cycles_toa;     // cycle count of the TOA path
    int failures = 0;
};

ResultTable run_experiment(const ExperimentSpec& spec);

// FNV-1a hash of a string, hex encoded (used for spec hashes in metadata).
std::string fnv1a_hex(const std::string& s);

// All trials of one spec at a single SNR, with per-trial outputs retained.
TrialStats run_trials_at_snr(const ExperimentSpec& spec, double snr_db, int snr_index = 0);

// fig2a: three bandwidths {160, 200, 300} MHz; fig2b: 200 MHz bands at
// apertures {0.25, 0.5, 1, 2} GHz; fig2c: scenarios S1..S5.
std::vector<ExperimentSpec> preset_experiments(const std::string& tag);

// Default two-band setup shared by the presets (S3-style channel, 200 MHz
// bands at 4 and 5 GHz, N = 128).
ExperimentSpec default_experiment();

} // namespace mrtoa
