// SPDX-License-Identifier: Apache-2.0
#include "mrtoa/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrtoa/errors.hpp"
#include "mrtoa/linalg.hpp"

namespace mrtoa {

namespace {

constexpr double kMarginThreshold = 0.25; // cycles

Eigen::Map<const Eigen::VectorXcd> as_vector(std::span<const std::complex<double>> h)
{
    return {h.data(), static_cast<Eigen::Index>(h.size())};
}

DelayEstimate finalize(std::vector<PathDelay> paths)
{
    std::sort(paths.begin(), paths.end(),
              [](const PathDelay& a, const PathDelay& b) { return a.delay_s < b.delay_s; });
    DelayEstimate out;
    out.any_flagged = false;
    for (const auto& p : paths)
        out.any_flagged = out.any_flagged || p.flagged;
    out.toa_s = paths.front().delay_s;
    out.paths = std::move(paths);
    return out;
}

// Shared core of the spurious-path gate: least-squares gains of the model
// columns B against the data y, magnitude threshold relative to the
// strongest path, toa_s recomputed over the survivors.
void apply_gain_gate(DelayEstimate& de, const Eigen::MatrixXcd& B, const Eigen::VectorXcd& y,
                     double ratio)
{
    const Eigen::VectorXcd alpha = B.colPivHouseholderQr().solve(y);
    double max_mag = 0.0;
    for (Eigen::Index k = 0; k < alpha.size(); ++k)
        max_mag = std::max(max_mag, std::abs(alpha(k)));
    for (Eigen::Index k = 0; k < alpha.size(); ++k) {
        auto& p = de.paths[static_cast<std::size_t>(k)];
        p.gain_mag = std::abs(alpha(k));
        p.spurious = p.gain_mag < ratio * max_mag;
    }
    de.toa_s = de.paths.front().delay_s;
    for (const auto& p : de.paths) // sorted by delay ascending
        if (!p.spurious) {
            de.toa_s = p.delay_s;
            break;
        }
}

} // namespace

void gate_spurious_paths(DelayEstimate& de, const ChannelEstimateSet& est, double ratio)
{
    if (de.paths.empty())
        return;
    const auto k = static_cast<Eigen::Index>(de.paths.size());
    Eigen::Index rows = 0;
    for (const auto& band : est.bands)
        rows += static_cast<Eigen::Index>(band.h.size());
    Eigen::MatrixXcd B(rows, k);
    Eigen::VectorXcd y(rows);
    Eigen::Index row = 0;
    for (const auto& band : est.bands)
        for (std::size_t m = 0; m < band.h.size(); ++m) {
            const double w = band.band.center_rad + static_cast<double>(m) * est.delta_omega;
            for (Eigen::Index c = 0; c < k; ++c)
                B(row, c) = std::polar(1.0, -w * de.paths[static_cast<std::size_t>(c)].delay_s);
            y(row) = band.h[m];
            ++row;
        }
    apply_gain_gate(de, B, y, ratio);
}

void gate_spurious_paths(DelayEstimate& de, std::span<const std::complex<double>> h,
                         double omega_t, double ratio)
{
    if (de.paths.empty())
        return;
    const auto k = static_cast<Eigen::Index>(de.paths.size());
    const auto rows = static_cast<Eigen::Index>(h.size());
    Eigen::MatrixXcd B(rows, k);
    for (Eigen::Index m = 0; m < rows; ++m)
        for (Eigen::Index c = 0; c < k; ++c)
            B(m, c) = std::polar(1.0, -static_cast<double>(m) * omega_t *
                                          de.paths[static_cast<std::size_t>(c)].delay_s);
    apply_gain_gate(de, B, as_vector(h), ratio);
}

HankelParams HankelParams::near_square(int n_samples, int model_order)
{
    const int cols = (n_samples + 1) / 2; // Q + 1
    HankelParams hp;
    hp.cols_index = cols - 1;
    hp.rows = n_samples - hp.cols_index - 1;
    hp.model_order = model_order;
    hp.validate(n_samples);
    return hp;
}

void HankelParams::validate(int n_samples) const
{
    if (model_order < 1)
        throw std::invalid_argument("HankelParams: model order must be >= 1");
    if (rows != n_samples - cols_index - 1)
        throw std::invalid_argument("HankelParams: P must equal N - Q - 1");
    if (rows <= model_order)
        throw std::invalid_argument("HankelParams: require P > K");
    if (cols_index < model_order)
        throw std::invalid_argument("HankelParams: require Q >= K");
}

Eigen::MatrixXcd build_hankel(std::span<const std::complex<double>> h, const HankelParams& params)
{
    const int n = static_cast<int>(h.size());
    params.validate(n);
    Eigen::MatrixXcd H(params.rows, params.cols_index + 1);
    for (int p = 0; p < params.rows; ++p)
        for (int q = 0; q <= params.cols_index; ++q)
            H(p, q) = h[static_cast<std::size_t>(p + q)];
    return H;
}

Eigen::MatrixXcd signal_subspace(const Eigen::MatrixXcd& H, int model_order)
{
    if (model_order < 1 || model_order > std::min(H.rows(), H.cols()))
        throw std::invalid_argument("signal_subspace: model order exceeds matrix dimensions");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(H, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(model_order);
}

int suggest_model_order(const Eigen::MatrixXcd& H)
{
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(H);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() < 2)
        return static_cast<int>(sv.size());
    int best = 1;
    double best_gap = 0.0;
    for (Eigen::Index i = 0; i + 1 < sv.size(); ++i) {
        const double gap = sv(i) / std::max(sv(i + 1), 1e-300);
        if (gap > best_gap) {
            best_gap = gap;
            best = static_cast<int>(i) + 1;
        }
    }
    return best;
}

DelayEstimate single_band_esprit(std::span<const std::complex<double>> h,
                                 const HankelParams& params, double omega_t, int shift)
{
    if (shift < 1)
        throw std::invalid_argument("single_band_esprit: shift must be >= 1");
    if (params.rows - shift <= params.model_order)
        throw std::invalid_argument("single_band_esprit: require P - r > K");
    if (!(omega_t > 0.0))
        throw std::invalid_argument("single_band_esprit: omega_t must be positive");

    const Eigen::MatrixXcd H = build_hankel(h, params);
    const Eigen::MatrixXcd U = signal_subspace(H, params.model_order);
    const Eigen::MatrixXcd U1 = U.topRows(params.rows - shift);
    const Eigen::MatrixXcd U2 = U.bottomRows(params.rows - shift);
    const Eigen::MatrixXcd Psi = pinv_apply(U1, U2);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(Psi, false);
    std::vector<PathDelay> paths(static_cast<std::size_t>(params.model_order));
    for (int k = 0; k < params.model_order; ++k) {
        const double phi = wrap_two_pi(-std::arg(ces.eigenvalues()(k)));
        auto& p = paths[static_cast<std::size_t>(k)];
        p.coarse_phase = phi;
        p.coarse_delay_s = phi / (shift * omega_t);
        p.delay_s = p.coarse_delay_s;
        p.has_fine = false;
    }
    DelayEstimate out = finalize(std::move(paths));
    gate_spurious_paths(out, h, omega_t);
    return out;
}

Eigen::MatrixXcd stack_two_band(std::span<const std::complex<double>> h1,
                                std::span<const std::complex<double>> h2,
                                const HankelParams& params)
{
    if (h1.size() != h2.size())
        throw std::invalid_argument("stack_two_band: vectors must have equal length");
    Eigen::MatrixXcd H(2 * params.rows, params.cols_index + 1);
    H.topRows(params.rows) = build_hankel(h1, params);
    H.bottomRows(params.rows) = build_hankel(h2, params);
    return H;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> solve_invariances(const Eigen::MatrixXcd& U,
                                                                int block_rows, int shift)
{
    const int p = block_rows;
    const int k = static_cast<int>(U.cols());
    if (U.rows() != 2 * p)
        throw std::invalid_argument("solve_invariances: U must have 2P rows");
    if (shift < 1 || shift >= p)
        throw std::invalid_argument("solve_invariances: shift out of range");
    if (2 * (p - shift) < k || p < k)
        throw std::invalid_argument("solve_invariances: each selected submatrix needs >= K rows");

    // Intra-band shift: first/last p - shift rows of each block.
    Eigen::MatrixXcd Uphi1(2 * (p - shift), k);
    Eigen::MatrixXcd Uphi2(2 * (p - shift), k);
    Uphi1.topRows(p - shift) = U.middleRows(0, p - shift);
    Uphi1.bottomRows(p - shift) = U.middleRows(p, p - shift);
    Uphi2.topRows(p - shift) = U.middleRows(shift, p - shift);
    Uphi2.bottomRows(p - shift) = U.middleRows(p + shift, p - shift);

    // Inter-band shift: first block against second block.
    const Eigen::MatrixXcd Utheta1 = U.topRows(p);
    const Eigen::MatrixXcd Utheta2 = U.bottomRows(p);

    return {pinv_apply(Uphi1, Uphi2), pinv_apply(Utheta1, Utheta2)};
}

std::vector<PhasePair> joint_diagonalize(const Eigen::MatrixXcd& Psi,
                                         const Eigen::MatrixXcd& Upsilon)
{
    if (Psi.rows() != Psi.cols() || Upsilon.rows() != Upsilon.cols() ||
        Psi.rows() != Upsilon.rows())
        throw std::invalid_argument("joint_diagonalize: matrices must be square with equal size");

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(Psi, true);
    const Eigen::MatrixXcd T = ces.eigenvectors();

    Eigen::JacobiSVD<Eigen::MatrixXcd> tsvd(T);
    const Eigen::VectorXd& sv = tsvd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e10)
        throw degenerate_geometry_error(
            "joint_diagonalize: eigenvector matrix nearly singular (defective coarse spectrum)");

    const Eigen::MatrixXcd D = T.partialPivLu().solve(Upsilon * T);

    std::vector<PhasePair> pairs(static_cast<std::size_t>(Psi.rows()));
    for (Eigen::Index kidx = 0; kidx < Psi.rows(); ++kidx) {
        pairs[static_cast<std::size_t>(kidx)].coarse = wrap_two_pi(-std::arg(ces.eigenvalues()(kidx)));
        pairs[static_cast<std::size_t>(kidx)].fine = wrap_two_pi(-std::arg(D(kidx, kidx)));
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const PhasePair& a, const PhasePair& b) { return a.coarse < b.coarse; });
    return pairs;
}

DelayEstimate unwrap_and_combine(const std::vector<PhasePair>& pairs, double omega_t,
                                 double omega_1, double omega_2, CombineMode mode)
{
    if (!(omega_2 > omega_1))
        throw std::invalid_argument("unwrap_and_combine: omega_2 must exceed omega_1");
    if (!(omega_t > 0.0))
        throw std::invalid_argument("unwrap_and_combine: omega_t must be positive");

    const double aperture = omega_2 - omega_1;
    const double ratio = aperture / omega_t;
    const double duration = 2.0 * M_PI / omega_t;
    const double two_pi = 2.0 * M_PI;

    std::vector<PathDelay> paths;
    paths.reserve(pairs.size());
    for (const auto& pr : pairs) {
        PathDelay p;
        p.coarse_phase = pr.coarse;
        p.fine_phase = pr.fine;
        p.has_fine = true;
        p.coarse_delay_s = pr.coarse / omega_t;

        const double x = (ratio * pr.coarse - pr.fine) / two_pi;
        p.cycles = std::lround(x);
        p.margin_cycles = 0.5 - std::abs(x - static_cast<double>(p.cycles));
        if (p.margin_cycles < kMarginThreshold)
            p.flagged = true;

        const double fine_delay = (pr.fine + two_pi * static_cast<double>(p.cycles)) / aperture;
        if (mode == CombineMode::FineOnly) {
            p.delay_s = fine_delay;
        } else {
            const double wc = omega_t * omega_t;
            const double wf = aperture * aperture;
            p.delay_s = (wc * p.coarse_delay_s + wf * fine_delay) / (wc + wf);
        }
        if (p.delay_s < 0.0) {
            p.delay_s = 0.0;
            p.flagged = true;
        } else if (p.delay_s >= duration) {
            p.delay_s = std::nextafter(duration, 0.0);
            p.flagged = true;
        }
        paths.push_back(p);
    }
    return finalize(std::move(paths));
}

DelayEstimate estimate_multiband(const ChannelEstimateSet& est, int model_order,
                                 const HankelParams& params, CombineMode mode)
{
    if (est.bands.size() < 2)
        throw std::invalid_argument("estimate_multiband: need at least two bands");
    if (model_order != params.model_order)
        throw std::invalid_argument("estimate_multiband: model order mismatch with HankelParams");
    const double omega_t = est.delta_omega;
    const double omega_1 = est.bands.front().band.center_rad;

    auto pairs_for = [&](std::size_t j) {
        const Eigen::MatrixXcd H = stack_two_band(est.bands[0].h, est.bands[j].h, params);
        const Eigen::MatrixXcd U = signal_subspace(H, model_order);
        const auto [Psi, Upsilon] = solve_invariances(U, params.rows, 1);
        return joint_diagonalize(Psi, Upsilon);
    };

    // First rung: bands (1, 2), unwrapped against the coarse phases.
    DelayEstimate cur = unwrap_and_combine(pairs_for(1), omega_t, omega_1,
                                           est.bands[1].band.center_rad, mode);

    // Remaining rungs: widen the aperture pairwise, unwrapping each fine
    // phase against the previous rung's delay for the same path (paths
    // matched through the shared band-1 coarse ordering).
    for (std::size_t j = 2; j < est.bands.size(); ++j) {
        const double omega_j = est.bands[j].band.center_rad;
        const double aperture = omega_j - omega_1;
        const double two_pi = 2.0 * M_PI;

        auto pairs = pairs_for(j); // sorted by coarse phase
        std::vector<PathDelay> prev = cur.paths;
        std::sort(prev.begin(), prev.end(), [](const PathDelay& a, const PathDelay& b) {
            return a.coarse_phase < b.coarse_phase;
        });
        if (prev.size() != pairs.size())
            throw degenerate_geometry_error("estimate_multiband: path count mismatch in ladder");

        std::vector<PathDelay> paths;
        paths.reserve(pairs.size());
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const double x = (aperture * prev[k].delay_s - pairs[k].fine) / two_pi;
            const long n = std::lround(x);
            const double margin = 0.5 - std::abs(x - static_cast<double>(n));
            if (margin < kMarginThreshold)
                throw unwrap_error("estimate_multiband: ladder step " + std::to_string(j + 1) +
                                   " rounding margin " + std::to_string(margin) +
                                   " below 0.25 cycles");
            PathDelay p;
            p.coarse_phase = pairs[k].coarse;
            p.fine_phase = pairs[k].fine;
            p.cycles = n;
            p.margin_cycles = margin;
            p.has_fine = true;
            p.coarse_delay_s = pairs[k].coarse / omega_t;
            const double fine_delay = (pairs[k].fine + two_pi * static_cast<double>(n)) / aperture;
            if (mode == CombineMode::FineOnly) {
                p.delay_s = fine_delay;
            } else {
                const double wc = omega_t * omega_t;
                const double wf = aperture * aperture;
                p.delay_s = (wc * p.coarse_delay_s + wf * fine_delay) / (wc + wf);
            }
            const double duration = two_pi / omega_t;
            if (p.delay_s < 0.0) {
                p.delay_s = 0.0;
                p.flagged = true;
            } else if (p.delay_s >= duration) {
                p.delay_s = std::nextafter(duration, 0.0);
                p.flagged = true;
            }
            paths.push_back(p);
        }
        cur = finalize(std::move(paths));
    }
    gate_spurious_paths(cur, est);
    return cur;
}

} // namespace mrtoa
