// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mrtoa/channel.hpp"

namespace mrtoa {

// Inputs for the conditional delay bound: the data model stacks every
// band's Vandermonde-with-carrier-phase matrix into one tall model with
// shared gains and white noise of variance sigma^2 per bin.
struct CrlbInput {
    MultipathChannel channel;
    std::vector<BandConfig> bands;
    int n_samples = 0;
    double duration_s = 0.0;
    double noise_variance = 0.0;
    // Gain covariance E{alpha alpha^H}; empty => rank-1 alpha*alpha^H from
    // the channel's (real) gains.
    Eigen::MatrixXcd gain_cov;

    static CrlbInput make(MultipathChannel channel, std::vector<BandConfig> bands, int n_samples,
                          double duration_s, double noise_variance);
};

// Fisher information matrix for the K delays:
// (2/sigma^2) * Re[ D^H P_B_perp D  (hadamard) R_alpha ]
// with analytic derivative columns D.
Eigen::MatrixXd analytic_fim(const CrlbInput& input);

// Variance lower bounds for the K delays (seconds^2): diagonal of the
// inverse of analytic_fim.
Eigen::VectorXd crlb_delays(const CrlbInput& input);

// Independent check: the same Fisher information with the derivative
// columns computed by central finite differences of the noiseless model
// columns (4th-order stencil). Throws when halving the step moves the
// result by more than 1e-4 relative (step too large).
Eigen::MatrixXd numerical_fim(const CrlbInput& input, double step = 1e-13);

} // namespace mrtoa
