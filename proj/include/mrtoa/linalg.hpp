// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace mrtoa {

inline double wrap_two_pi(double x)
{
    const double two_pi = 2.0 * M_PI;
    double t = std::fmod(x, two_pi);
    if (t < 0.0)
        t += two_pi;
    if (t >= two_pi)
        t -= two_pi;
    return t;
}

// Moore-Penrose pseudo-inverse applied to B: pinv(A) * B, computed via SVD
// with a relative singular-value cutoff of 1e-12. Throws
// degenerate_geometry_error when the condition number exceeds 1e12.
Eigen::MatrixXcd pinv_apply(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

} // namespace mrtoa
