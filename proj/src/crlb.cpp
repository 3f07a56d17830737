// SPDX-License-Identifier: Apache-2.0
#include "mrtoa/crlb.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mrtoa {

namespace {

using cd = std::complex<double>;

void validate(const CrlbInput& in)
{
    validate_bands(in.bands);
    if (in.n_samples < 2)
        throw std::invalid_argument("crlb: n_samples must be >= 2");
    if (!(in.duration_s > 0.0))
        throw std::invalid_argument("crlb: duration must be positive");
    if (!(in.noise_variance > 0.0))
        throw std::invalid_argument("crlb: noise variance must be positive");
    const auto k = static_cast<Eigen::Index>(in.channel.num_paths());
    if (in.gain_cov.rows() != k || in.gain_cov.cols() != k)
        throw std::invalid_argument("crlb: gain covariance must be K x K");
}

// Column of the stacked model for one delay: over bands i and bins n,
// entry = exp(-j*(Omega_i + n*Omega_t)*tau).
Eigen::VectorXcd model_column(const CrlbInput& in, double tau)
{
    const auto n = in.n_samples;
    const double omega_t = 2.0 * M_PI / in.duration_s;
    Eigen::VectorXcd b(static_cast<Eigen::Index>(in.bands.size()) * n);
    Eigen::Index row = 0;
    for (const auto& band : in.bands)
        for (int m = 0; m < n; ++m)
            b(row++) = std::polar(1.0, -(band.center_rad + m * omega_t) * tau);
    return b;
}

Eigen::VectorXcd model_column_derivative(const CrlbInput& in, double tau)
{
    const auto n = in.n_samples;
    const double omega_t = 2.0 * M_PI / in.duration_s;
    Eigen::VectorXcd d(static_cast<Eigen::Index>(in.bands.size()) * n);
    Eigen::Index row = 0;
    for (const auto& band : in.bands)
        for (int m = 0; m < n; ++m) {
            const double w = band.center_rad + m * omega_t;
            d(row++) = cd(0.0, -w) * std::polar(1.0, -w * tau);
        }
    return d;
}

// Re[ D^H P_B_perp D (hadamard) R_alpha ], without forming the projector.
// Projecting the derivative columns first and taking the Gram of the
// residual keeps the result numerically positive semidefinite, which the
// difference D^H D - (B^H D)^H (B^H B)^{-1} (B^H D) does not.
Eigen::MatrixXd information_core(const CrlbInput& in, const Eigen::MatrixXcd& B,
                                 const Eigen::MatrixXcd& D)
{
    const Eigen::MatrixXcd BtB = B.adjoint() * B;
    Eigen::LLT<Eigen::MatrixXcd> llt(BtB);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("crlb: model matrix rank-deficient (coincident delays?)");
    const Eigen::MatrixXcd d_perp = D - B * llt.solve(B.adjoint() * D);

    // M (hadamard) R = sum_r diag(l_r) M diag(l_r)^H over a PSD factor
    // R = sum_r l_r l_r^H, so each term is again a Gram matrix.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(in.gain_cov);
    if (es.info() != Eigen::Success)
        throw std::invalid_argument("crlb: gain covariance eigendecomposition failed");
    Eigen::MatrixXd core = Eigen::MatrixXd::Zero(D.cols(), D.cols());
    for (Eigen::Index r = 0; r < es.eigenvalues().size(); ++r) {
        const double ev = es.eigenvalues()(r);
        if (ev <= 0.0)
            continue;
        const Eigen::VectorXcd l = std::sqrt(ev) * es.eigenvectors().col(r);
        const Eigen::MatrixXcd c = d_perp * l.conjugate().asDiagonal();
        core += (c.adjoint() * c).real();
    }
    return core;
}

Eigen::MatrixXd fim_from_columns(const CrlbInput& in, const Eigen::MatrixXcd& D)
{
    const auto k = static_cast<Eigen::Index>(in.channel.num_paths());
    const auto rows = static_cast<Eigen::Index>(in.bands.size()) * in.n_samples;
    Eigen::MatrixXcd B(rows, k);
    for (Eigen::Index c = 0; c < k; ++c)
        B.col(c) = model_column(in, in.channel.paths()[static_cast<std::size_t>(c)].delay_s);
    return (2.0 / in.noise_variance) * information_core(in, B, D);
}

} // namespace

CrlbInput CrlbInput::make(MultipathChannel channel, std::vector<BandConfig> bands, int n_samples,
                          double duration_s, double noise_variance)
{
    CrlbInput in{std::move(channel), std::move(bands), n_samples, duration_s, noise_variance, {}};
    const auto k = static_cast<Eigen::Index>(in.channel.num_paths());
    Eigen::VectorXcd alpha(k);
    for (Eigen::Index c = 0; c < k; ++c)
        alpha(c) = in.channel.paths()[static_cast<std::size_t>(c)].gain;
    in.gain_cov = alpha * alpha.adjoint();
    return in;
}

Eigen::MatrixXd analytic_fim(const CrlbInput& input)
{
    validate(input);
    const auto k = static_cast<Eigen::Index>(input.channel.num_paths());
    const auto rows = static_cast<Eigen::Index>(input.bands.size()) * input.n_samples;
    Eigen::MatrixXcd D(rows, k);
    for (Eigen::Index c = 0; c < k; ++c)
        D.col(c) = model_column_derivative(input,
                                           input.channel.paths()[static_cast<std::size_t>(c)].delay_s);
    return fim_from_columns(input, D);
}

Eigen::VectorXd crlb_delays(const CrlbInput& input)
{
    const auto k = static_cast<Eigen::Index>(input.channel.num_paths());
    const Eigen::MatrixXd fim = analytic_fim(input);
    Eigen::LLT<Eigen::MatrixXd> llt(fim);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("crlb: Fisher information not positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(k, k)).diagonal();
}

Eigen::MatrixXd numerical_fim(const CrlbInput& input, double step)
{
    validate(input);
    if (!(step > 0.0))
        throw std::invalid_argument("numerical_fim: step must be positive");

    const auto k = static_cast<Eigen::Index>(input.channel.num_paths());
    const auto rows = static_cast<Eigen::Index>(input.bands.size()) * input.n_samples;

    auto fim_with_step = [&](double h) {
        Eigen::MatrixXcd D(rows, k);
        for (Eigen::Index c = 0; c < k; ++c) {
            const double tau = input.channel.paths()[static_cast<std::size_t>(c)].delay_s;
            D.col(c) = (-model_column(input, tau + 2 * h) + 8.0 * model_column(input, tau + h) -
                        8.0 * model_column(input, tau - h) + model_column(input, tau - 2 * h)) /
                       (12.0 * h);
        }
        return fim_from_columns(input, D);
    };

    const Eigen::MatrixXd fim = fim_with_step(step);
    const Eigen::MatrixXd fim_half = fim_with_step(step / 2.0);
    const double rel = (fim - fim_half).norm() / fim.norm();
    if (rel > 1e-4)
        throw std::invalid_argument("numerical_fim: step too large (halving moved the result by " +
                                    std::to_string(rel) + " relative)");
    return fim;
}

} // namespace mrtoa
