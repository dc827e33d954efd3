#pragma once

#include <cmath>

#include "sqrtlasso/core.hpp"

namespace sqrtlasso {

// Optimality certificate for a square-root lasso fit, built from the conic
// dual  max E_n[y a]  s.t.  |E_n[x_j a]| <= lambda gamma_j / n,  ||a|| <= sqrt(n).
struct Certificate {
    Vector dual_a;
    double max_constraint_violation = 0.0;  // max_j (|E_n[x_j a]| - lambda gamma_j/n)_+
    double active_sign_gap = 0.0;           // max_{j in support} |E_n[x_j a] - sign(b_j) lambda gamma_j/n|
    double ball_slack = 0.0;                // sqrt(n) - ||a||
    double gap = 0.0;                       // primal objective - E_n[y a~], a~ rescaled feasible
    bool feasible_after_scaling = false;
    bool primal_only = false;               // zero-residual fit, certified without a dual vector

    bool passes(double tol) const {
        if (primal_only) return feasible_after_scaling;
        return max_constraint_violation <= tol && active_sign_gap <= tol &&
               gap >= -1e-10;
    }
};

// A fit whose root mean squared residual is this far below the response scale
// is treated as interpolating; the residual direction is pure roundoff there.
inline bool interpolates(double q, const Dataset& data) {
    const double rms_y = std::sqrt(data.y().squaredNorm() / static_cast<double>(data.n()));
    return std::sqrt(std::max(q, 0.0)) <= 1e-12 * (1.0 + rms_y);
}

// Dual candidate a = (y - X beta) / sqrt(qhat); has norm sqrt(n) by
// construction. Throws ZeroResidualFit when the fit interpolates.
inline Vector dual_vector(const FitResult& fit, const Dataset& data) {
    const Vector r = data.y() - data.x() * fit.beta;
    const double q = r.squaredNorm() / static_cast<double>(data.n());
    if (interpolates(q, data)) throw ZeroResidualFit();
    return r / std::sqrt(q);
}

// E_n[y_i a_i], the dual objective.
inline double dual_value(const Vector& a, const Dataset& data) {
    return data.y().dot(a) / static_cast<double>(data.n());
}

// Uniform shrink factor min(1, min_j lambda gamma_j / (n |E_n[x_j a]|)) that
// restores the correlation constraints exactly while preserving direction.
inline double feasibility_scale(const Vector& a, const Dataset& data,
                                const PenaltyScheme& scheme) {
    const double n = static_cast<double>(data.n());
    double scale = 1.0;
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const double corr = std::abs(data.x().col(j).dot(a)) / n;
        const double bound = scheme.lambda * scheme.loadings[j] / n;
        if (corr > bound) scale = std::min(scale, bound / corr);
    }
    return scale;
}

// Checks the dual feasibility of the residual-based candidate, the sign
// conditions on the active set, and the duality gap after a uniform
// feasibility-restoring rescale. Zero-residual fits fall back to primal-only
// checks: the objective must equal the penalty term and the residuals must
// vanish, in which case the gap is defined as 0.
inline Certificate check_kkt(const FitResult& fit, const Dataset& data,
                             const PenaltyScheme& scheme, double tol = 1e-6) {
    const double n = static_cast<double>(data.n());
    Certificate cert;

    const Vector r = data.y() - data.x() * fit.beta;
    const double q = r.squaredNorm() / n;
    const double l1 = scheme.loadings.cwiseProduct(fit.beta.cwiseAbs()).sum();
    const double primal = std::sqrt(q) + scheme.lambda / n * l1;

    if (interpolates(q, data)) {
        cert.primal_only = true;
        cert.dual_a = Vector::Zero(data.n());
        cert.ball_slack = std::sqrt(n);
        cert.gap = 0.0;
        cert.feasible_after_scaling =
            std::abs(fit.objective - scheme.lambda / n * l1) <= tol * (1.0 + primal);
        return cert;
    }

    cert.dual_a = r / std::sqrt(q);
    cert.ball_slack = std::sqrt(n) - cert.dual_a.norm();

    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const double corr = data.x().col(j).dot(cert.dual_a) / n;
        const double bound = scheme.lambda * scheme.loadings[j] / n;
        cert.max_constraint_violation =
            std::max(cert.max_constraint_violation, std::abs(corr) - bound);
    }
    cert.max_constraint_violation = std::max(cert.max_constraint_violation, 0.0);

    for (Eigen::Index j : fit.support) {
        const double corr = data.x().col(j).dot(cert.dual_a) / n;
        const double target =
            (fit.beta[j] > 0.0 ? 1.0 : -1.0) * scheme.lambda * scheme.loadings[j] / n;
        cert.active_sign_gap = std::max(cert.active_sign_gap, std::abs(corr - target));
    }

    const double scale = feasibility_scale(cert.dual_a, data, scheme);
    cert.feasible_after_scaling = true;
    cert.gap = primal - scale * dual_value(cert.dual_a, data);
    return cert;
}

}  // namespace sqrtlasso
