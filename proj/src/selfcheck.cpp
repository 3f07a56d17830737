// SPDX-License-Identifier: Apache-2.0
#include "mrtoa/selfcheck.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "mrtoa/channel.hpp"
#include "mrtoa/crlb.hpp"
#include "mrtoa/errors.hpp"
#include "mrtoa/estimator.hpp"
#include "mrtoa/frontend.hpp"
#include "mrtoa/linalg.hpp"
#include "mrtoa/rng.hpp"

namespace mrtoa {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::vector<BandConfig> default_bands()
{
    return {{kTwoPi * 4.0e9, kTwoPi * 200e6}, {kTwoPi * 5.0e9, kTwoPi * 200e6}};
}

// Noiseless multiband estimation on a handful of off-grid channels. With the
// corrupt_selection hook the stacked subspace has two rows swapped before the
// invariance solve, which breaks the shift structure.
CheckResult check_noiseless_exactness(bool corrupt)
{
    const int n = 128;
    const double duration = n / 200e6;
    const auto bands = default_bands();
    gaussian_rng rng(7);

    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const int k = 1 + trial;
        std::vector<PathComponent> paths;
        double delay = 0.05 * duration;
        for (int i = 0; i < k; ++i) {
            paths.push_back({0.5 + rng.uniform(), delay});
            delay += (0.02 + 0.1 * rng.uniform()) * duration;
        }
        const MultipathChannel channel(paths);
        const auto est = acquire_multiband_with_noise(channel, bands, n, duration, 0.0, 1);

        const auto params = HankelParams::near_square(n, k);
        Eigen::MatrixXcd H = stack_two_band(est.bands[0].h, est.bands[1].h, params);
        Eigen::MatrixXcd U = signal_subspace(H, k);
        if (corrupt)
            U.row(0).swap(U.row(params.rows / 2));
        const auto [Psi, Upsilon] = solve_invariances(U, params.rows, 1);
        const auto pairs = joint_diagonalize(Psi, Upsilon);
        const auto de = unwrap_and_combine(pairs, est.delta_omega, bands[0].center_rad,
                                           bands[1].center_rad);
        for (int i = 0; i < k; ++i) {
            const double rel = std::abs(de.paths[static_cast<std::size_t>(i)].delay_s -
                                        channel.paths()[static_cast<std::size_t>(i)].delay_s) /
                               channel.paths()[static_cast<std::size_t>(i)].delay_s;
            worst = std::max(worst, rel);
        }
    }
    std::ostringstream detail;
    detail << "worst relative delay error " << worst;
    return {"noiseless-exactness", worst < 1e-8, detail.str()};
}

CheckResult check_hankel_rank(bool corrupt)
{
    const int n = 64;
    const double duration = n / 200e6;
    const MultipathChannel channel({{1.0, 15e-9}, {0.7, 42e-9}, {0.4, 95e-9}});
    const BandConfig band{kTwoPi * 4.0e9, kTwoPi * 200e6};
    const auto h = band_channel_samples(channel, band, n, duration);
    const auto params = HankelParams::near_square(n, 3);
    Eigen::MatrixXcd H = build_hankel(h, params);
    if (corrupt)
        H.row(0).swap(H.row(params.rows / 2));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(H);
    const auto& sv = svd.singularValues();
    const double ratio = sv(3) / sv(0);
    std::ostringstream detail;
    detail << "sigma_4/sigma_1 = " << ratio;
    return {"hankel-rank", ratio < 1e-10, detail.str()};
}

CheckResult check_projector()
{
    const int n = 32;
    const double duration = n / 200e6;
    const MultipathChannel channel({{1.0, 20e-9}, {0.5, 55e-9}});
    auto input = CrlbInput::make(channel, default_bands(), n, duration, 1e-3);

    const auto rows = static_cast<Eigen::Index>(input.bands.size()) * n;
    const double omega_t = kTwoPi / duration;
    Eigen::MatrixXcd B(rows, 2);
    Eigen::Index row = 0;
    for (const auto& band : input.bands)
        for (int m = 0; m < n; ++m) {
            for (Eigen::Index c = 0; c < 2; ++c)
                B(row, c) = std::polar(1.0, -(band.center_rad + m * omega_t) *
                                                channel.paths()[static_cast<std::size_t>(c)].delay_s);
            ++row;
        }
    const Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(rows, rows) -
                               B * (B.adjoint() * B).inverse() * B.adjoint();
    const double idem = (P * P - P).norm() / P.norm();
    const double herm = (P - P.adjoint()).norm() / P.norm();
    const double annihilate = (P * B).norm() / B.norm();
    std::ostringstream detail;
    detail << "idempotence " << idem << ", hermiticity " << herm << ", P*B " << annihilate;
    return {"projector-idempotence", idem < 1e-12 && herm < 1e-12 && annihilate < 1e-12,
            detail.str()};
}

CheckResult check_crlb_vs_fim()
{
    const int n = 64;
    const double duration = n / 200e6;
    const auto channel = make_uwb_scenario(ScenarioVariant::Default);
    const auto input = CrlbInput::make(channel, default_bands(), n, duration, 1e-4);
    const Eigen::MatrixXd analytic = analytic_fim(input);
    const Eigen::MatrixXd numeric = numerical_fim(input);
    const double rel = (analytic - numeric).norm() / analytic.norm();
    std::ostringstream detail;
    detail << "relative mismatch " << rel;
    return {"crlb-vs-fim", rel < 1e-6, detail.str()};
}

} // namespace

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opt)
{
    std::vector<CheckResult> results;
    try {
        results.push_back(check_noiseless_exactness(opt.corrupt_selection));
    } catch (const std::exception& e) {
        results.push_back({"noiseless-exactness", false, e.what()});
    }
    results.push_back(check_hankel_rank(opt.corrupt_selection));
    results.push_back(check_projector());
    results.push_back(check_crlb_vs_fim());
    return results;
}

} // namespace mrtoa
