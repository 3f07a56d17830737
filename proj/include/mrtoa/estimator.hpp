// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "mrtoa/frontend.hpp"

namespace mrtoa {

// Hankel sizing: the matrix has `rows` rows (P) and cols_index + 1 columns
// (Q + 1), with P = N - Q - 1, P > K and Q >= K.
struct HankelParams {
    int rows = 0;       // P
    int cols_index = 0; // Q
    int model_order = 0; // K

    // Near-square default: Q + 1 = ceil(N/2).
    static HankelParams near_square(int n_samples, int model_order);

    void validate(int n_samples) const;
};

struct PathDelay {
    double coarse_phase = 0.0;   // phi_k in [0, 2*pi)
    double fine_phase = 0.0;     // theta_k in [0, 2*pi), multiband only
    long cycles = 0;             // n_k, multiband only
    double delay_s = 0.0;        // final estimate
    double coarse_delay_s = 0.0; // phi_k / omega_t
    double margin_cycles = 0.5;  // distance of the rounding argument from ambiguity
    double gain_mag = 0.0;       // |gain| from the least-squares refit
    bool has_fine = false;
    bool flagged = false;        // low rounding margin or out-of-range clamp
    bool spurious = false;       // negligible refitted gain (noise-subspace path)
};

struct DelayEstimate {
    std::vector<PathDelay> paths; // sorted by delay ascending
    double toa_s = 0.0;           // min_k delay over non-spurious paths
    bool any_flagged = false;
};

// When the model order exceeds the number of paths the data can support at
// the current noise level, the surplus subspace dimensions surface as paths
// at arbitrary delays. Refitting the gains by least squares at the
// estimated delays exposes them: a path fitting only noise gets a gain far
// below every real path. Paths under this fraction of the strongest
// refitted gain are marked spurious.
constexpr double kSpuriousGainRatio = 0.05;

// Hankel matrix with entry (p, q) = h[p + q]; size P x (Q + 1).
Eigen::MatrixXcd build_hankel(std::span<const std::complex<double>> h, const HankelParams& params);

// K dominant left singular vectors.
Eigen::MatrixXcd signal_subspace(const Eigen::MatrixXcd& H, int model_order);

// Largest singular-value-gap order suggestion (auxiliary; never implied).
int suggest_model_order(const Eigen::MatrixXcd& H);

// Classical single-band ESPRIT. A shift of r rows estimates the r-th power
// of the bin-to-bin phasor; delays come out in [0, T/r).
DelayEstimate single_band_esprit(std::span<const std::complex<double>> h,
                                 const HankelParams& params, double omega_t, int shift = 1);

// Vertical stack of the two per-band Hankel matrices, size 2P x (Q + 1).
Eigen::MatrixXcd stack_two_band(std::span<const std::complex<double>> h1,
                                std::span<const std::complex<double>> h2,
                                const HankelParams& params);

// Least-squares shift-invariance solutions on the stacked subspace:
// Psi from the intra-band row shift (r rows within each P-block), Upsilon
// from the inter-band block shift. U has 2P rows and K columns.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> solve_invariances(const Eigen::MatrixXcd& U,
                                                                int block_rows, int shift = 1);

struct PhasePair {
    double coarse = 0.0; // phi_k
    double fine = 0.0;   // theta_k
};

// Diagonalize Psi, reuse its eigenvectors on Upsilon so each coarse phase is
// paired with the fine phase of the same path. Sorted by coarse phase.
std::vector<PhasePair> joint_diagonalize(const Eigen::MatrixXcd& Psi,
                                         const Eigen::MatrixXcd& Upsilon);

enum class CombineMode { FineOnly, Weighted };

// Resolve the integer cycle counts from the coarse phases and map the fine
// phases to delays; Weighted blends coarse and fine with aperture^2 weights.
DelayEstimate unwrap_and_combine(const std::vector<PhasePair>& pairs, double omega_t,
                                 double omega_1, double omega_2,
                                 CombineMode mode = CombineMode::FineOnly);

// Refit complex gains at the estimated delays against the multiband data,
// mark paths with negligible gain as spurious, and recompute toa_s over the
// remaining paths. Called by estimate_multiband; exposed for reuse.
void gate_spurious_paths(DelayEstimate& de, const ChannelEstimateSet& est,
                         double ratio = kSpuriousGainRatio);

// Same gate against a single band's coefficient vector (center phase is
// absorbed into the fitted gains).
void gate_spurious_paths(DelayEstimate& de, std::span<const std::complex<double>> h,
                         double omega_t, double ratio = kSpuriousGainRatio);

// Full multiband pipeline. Two bands: stack, subspace, invariances, joint
// diagonalization, unwrap. More bands: pairwise ladder (1,2), (1,3), ...,
// each step unwrapping against the previous step's delays; a step throws
// unwrap_error when its rounding margin drops below 0.25 cycles. Finishes
// with the spurious-path gate.
DelayEstimate estimate_multiband(const ChannelEstimateSet& est, int model_order,
                                 const HankelParams& params,
                                 CombineMode mode = CombineMode::FineOnly);

} // namespace mrtoa
