// SPDX-License-Identifier: Apache-2.0
#include "mrtoa/linalg.hpp"

#include <Eigen/SVD>

#include "mrtoa/errors.hpp"

namespace mrtoa {

Eigen::MatrixXcd pinv_apply(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B)
{
    constexpr double kRelCutoff = 1e-12;
    constexpr double kMaxCond = 1e12;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0)
        throw degenerate_geometry_error("pinv: zero matrix");
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > kMaxCond)
        throw degenerate_geometry_error("pinv: condition number exceeds 1e12");

    Eigen::VectorXd inv = sv;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        inv(i) = (sv(i) > kRelCutoff * sv(0)) ? 1.0 / sv(i) : 0.0;

    return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().adjoint() * B);
}

} // namespace mrtoa
