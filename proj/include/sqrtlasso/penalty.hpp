#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "sqrtlasso/core.hpp"
#include "sqrtlasso/postsel.hpp"
#include "sqrtlasso/prob.hpp"

namespace sqrtlasso {

// ----------------------------------------------------------------------------
// Penalty levels
// ----------------------------------------------------------------------------

// Self-tuned square-root-lasso level: (1+u_n) c sqrt(n) (Phi^{-1}(1-alpha/2p)+1+u_n).
inline double lambda_sqrt_lasso(Eigen::Index n, Eigen::Index p, double alpha, double c,
                                double u_n) {
    if (n < 1 || p < 1) throw InvalidParameter("n and p must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must be in (0,1]");
    if (!(c > 1.0)) throw InvalidParameter("c must exceed 1 for the sqrt scheme");
    if (u_n < 0.0) throw InvalidParameter("u_n must be nonnegative");
    const double quant = normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(p)));
    return (1.0 + u_n) * c * std::sqrt(static_cast<double>(n)) * (quant + 1.0 + u_n);
}

// Plain pivotal level c sqrt(n) Phi^{-1}(1-alpha/2p) used for the
// homoskedastic simulation studies.
inline double lambda_sqrt_lasso_simple(Eigen::Index n, Eigen::Index p, double alpha,
                                       double c) {
    if (n < 1 || p < 1) throw InvalidParameter("n and p must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must be in (0,1]");
    if (!(c > 0.0)) throw InvalidParameter("c must be positive");
    return c * std::sqrt(static_cast<double>(n)) *
           normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(p)));
}

// Known-sigma lasso level: 2 c sigma sqrt(n) Phi^{-1}(1-alpha/2p).
inline double lambda_lasso_known_sigma(Eigen::Index n, Eigen::Index p, double alpha,
                                       double c, double sigma) {
    if (n < 1 || p < 1) throw InvalidParameter("n and p must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must be in (0,1]");
    if (!(c >= 1.0)) throw InvalidParameter("c must be >= 1");
    if (sigma < 0.0) throw InvalidParameter("sigma must be nonnegative");
    return 2.0 * c * sigma * std::sqrt(static_cast<double>(n)) *
           normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(p)));
}

// Recommended self-tuning parameters: alpha = 0.05/log n, c = 1.01,
// u_n = 0.1/log n, w = 2.
inline PenaltyParams recommended_params(Eigen::Index n) {
    PenaltyParams params;
    const double logn = std::log(static_cast<double>(std::max<Eigen::Index>(n, 3)));
    params.alpha = 0.05 / logn;
    params.c = 1.01;
    params.u_n = 0.1 / logn;
    params.w = 2.0;
    params.max_iter = 15;
    params.tolerance = 1e-4;
    return params;
}

// ----------------------------------------------------------------------------
// Penalty loadings
// ----------------------------------------------------------------------------

// Iteration-zero loadings gamma_{j,0} = w * (mean x_ij^4)^{1/4}.
inline Vector initial_loadings(const Matrix& x, double w) {
    if (!(w > 0.0)) throw InvalidParameter("w must be positive");
    const double n = static_cast<double>(x.rows());
    Vector out(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double fourth = x.col(j).array().pow(4).sum() / n;
        out[j] = w * std::pow(fourth, 0.25);
    }
    return out;
}

// Refined loadings 1 v sqrt(mean x_ij^2 e_i^2)/sqrt(mean e_i^2). Throws
// ZeroResiduals in the noiseless regime, where the ratio is 0/0; the caller
// keeps its previous loadings.
inline Vector refine_loadings(const Matrix& x, const Vector& residuals) {
    if (residuals.size() != x.rows())
        throw DimensionMismatch("residuals length does not match n");
    const double n = static_cast<double>(x.rows());
    const double mean_sq = residuals.squaredNorm() / n;
    if (mean_sq <= 0.0) throw ZeroResiduals();
    const Vector e2 = residuals.array().square();
    Vector out(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double num = (x.col(j).array().square() * e2.array()).sum() / n;
        out[j] = std::max(1.0, std::sqrt(num) / std::sqrt(mean_sq));
    }
    return out;
}

// Loadings from a known error vector, gamma_j^* = 1 v sqrt(E_n[x^2 eps^2])/sqrt(E_n[eps^2]).
// Same ratio as refine_loadings; named separately because the errors here are
// the true disturbances, not fitted residuals.
inline Vector ideal_loadings(const Matrix& x, const Vector& errors) {
    return refine_loadings(x, errors);
}

// Heavy-tail scheme for symmetric errors: gamma_j = max_i |x_ij| and
// lambda = (1+u_n) c sqrt(n) (1 + sqrt(2 log(2p/alpha))).
inline PenaltyScheme symmetric_scheme(const Matrix& x, double alpha, double c,
                                      double u_n) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must be in (0,1)");
    if (!(c > 1.0)) throw InvalidParameter("c must exceed 1");
    if (u_n < 0.0) throw InvalidParameter("u_n must be nonnegative");
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    PenaltyScheme scheme;
    scheme.kind = PenaltyKind::SymmetricHeavyTail;
    scheme.params.alpha = alpha;
    scheme.params.c = c;
    scheme.params.u_n = u_n;
    scheme.lambda = (1.0 + u_n) * c * std::sqrt(static_cast<double>(n)) *
                    (1.0 + std::sqrt(2.0 * std::log(2.0 * static_cast<double>(p) / alpha)));
    scheme.loadings = x.cwiseAbs().colwise().maxCoeff().transpose();
    return scheme;
}

// ----------------------------------------------------------------------------
// Iterative loading estimation
// ----------------------------------------------------------------------------

enum class StopReason { ToleranceMet, MaxIterations };

inline const char* to_string(StopReason r) {
    return r == StopReason::ToleranceMet ? "tolerance_met" : "max_iterations";
}

struct LoadingTrace {
    std::vector<Vector> loadings;    // accepted loading vectors, first entry is k=0
    std::vector<double> max_changes; // sup-norm change per refinement attempt
    StopReason stop_reason = StopReason::ToleranceMet;
};

struct Algorithm1Result {
    PenaltyScheme scheme;
    LoadingTrace trace;
    FitResult last_fit;  // fit under the loadings preceding the final ones
};

// Fits the square-root lasso for a given scheme; warm_start may be null.
using SqrtLassoSolver =
    std::function<FitResult(const Dataset&, const PenaltyScheme&, const Vector*)>;

// Iterative loading estimation. Starts from fourth-moment loadings, refits,
// refines from residuals, and stops once the sup-norm loading change falls
// below params.tolerance or params.max_iter refinements have been accepted.
// A refinement attempt that hits the iteration cap is discarded, so at most
// max_iter+1 loading vectors are recorded. Zero residuals end the iteration
// with the current loadings. When refine_with_post_ols is set, Step 2 uses
// the residuals of the least squares refit on the selected support.
inline Algorithm1Result run_algorithm1(const Dataset& data, const PenaltyParams& params,
                                       const SqrtLassoSolver& solver,
                                       bool refine_with_post_ols = false) {
    if (!(params.w >= 1.0))
        throw InvalidParameter("w must be >= 1 so loadings respect the unit floor");
    if (params.max_iter < 0) throw InvalidParameter("max_iter must be >= 0");
    if (!(params.tolerance >= 0.0)) throw InvalidParameter("tolerance must be >= 0");

    Algorithm1Result out;
    out.scheme.kind = PenaltyKind::SqrtLassoIterative;
    out.scheme.params = params;
    out.scheme.lambda =
        lambda_sqrt_lasso(data.n(), data.p(), params.alpha, params.c, params.u_n);

    Vector gamma = initial_loadings(data.x(), params.w);
    out.trace.loadings.push_back(gamma);

    const Vector* warm = nullptr;
    int accepted = 0;
    while (true) {
        PenaltyScheme current;
        current.lambda = out.scheme.lambda;
        current.loadings = gamma;
        current.kind = PenaltyKind::SqrtLassoIterative;
        current.params = params;
        out.last_fit = solver(data, current, warm);
        warm = &out.last_fit.beta;

        Vector residuals;
        if (refine_with_post_ols) {
            const FitResult refit = ols_post(data, out.last_fit.support);
            residuals = data.y() - data.x() * refit.beta;
        } else {
            residuals = data.y() - data.x() * out.last_fit.beta;
        }

        // residuals at roundoff level signal the noiseless regime: the Step 2
        // ratio is 0/0 there and the fit is already exact
        const double rms_resid =
            std::sqrt(residuals.squaredNorm() / static_cast<double>(data.n()));
        const double rms_y =
            std::sqrt(data.y().squaredNorm() / static_cast<double>(data.n()));
        if (rms_resid <= 1e-12 * (1.0 + rms_y)) {
            out.trace.stop_reason = StopReason::ToleranceMet;
            break;
        }

        Vector candidate;
        try {
            candidate = refine_loadings(data.x(), residuals);
        } catch (const ZeroResiduals&) {
            out.trace.stop_reason = StopReason::ToleranceMet;
            break;
        }

        const double change = (candidate - gamma).cwiseAbs().maxCoeff();
        out.trace.max_changes.push_back(change);
        if (change <= params.tolerance && accepted < params.max_iter) {
            gamma = candidate;
            out.trace.loadings.push_back(gamma);
            out.trace.stop_reason = StopReason::ToleranceMet;
            break;
        }
        if (accepted >= params.max_iter) {
            out.trace.stop_reason = StopReason::MaxIterations;
            break;
        }
        gamma = candidate;
        out.trace.loadings.push_back(gamma);
        ++accepted;
    }

    out.scheme.loadings = gamma;
    return out;
}

}  // namespace sqrtlasso
