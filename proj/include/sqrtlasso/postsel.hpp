#pragma once

#include <Eigen/QR>

#include "sqrtlasso/core.hpp"

namespace sqrtlasso {

// Least squares refit restricted to the given support. Uses a rank-revealing
// complete orthogonal decomposition, so collinear selected columns get the
// minimum-norm coefficient vector. Off-support coordinates are exactly zero.
inline FitResult ols_post(const Dataset& data, const std::vector<Eigen::Index>& support) {
    const Eigen::Index p = data.p();
    for (Eigen::Index j : support)
        if (j < 0 || j >= p)
            throw InvalidParameter("support index " + std::to_string(j) +
                                   " outside 1..p");

    FitResult out;
    out.beta = Vector::Zero(p);
    if (!support.empty()) {
        Matrix xs(data.n(), static_cast<Eigen::Index>(support.size()));
        for (std::size_t k = 0; k < support.size(); ++k)
            xs.col(static_cast<Eigen::Index>(k)) = data.x().col(support[k]);
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(xs);
        Vector beta_s = cod.solve(data.y());
        for (std::size_t k = 0; k < support.size(); ++k)
            out.beta[support[k]] = beta_s[static_cast<Eigen::Index>(k)];
    }
    out.support = support_of(out.beta);
    out.q_hat = q_hat(out.beta, data);
    out.objective = std::sqrt(out.q_hat);
    out.iterations = 0;
    out.converged = true;
    return out;
}

}  // namespace sqrtlasso
