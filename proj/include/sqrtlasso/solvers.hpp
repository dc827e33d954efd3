#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "sqrtlasso/certify.hpp"
#include "sqrtlasso/core.hpp"

namespace sqrtlasso {

enum class SolverMethod { CoordinateDescent, FirstOrder };

struct SolverOptions {
    double tol = 1e-10;       // sup-norm coordinate change (CD) stopping threshold
    int max_sweeps = 20000;
    SolverMethod method = SolverMethod::CoordinateDescent;
    double fo_smoothing = 0.0;   // mu > 0 fixes the primal step to 1/mu; 0 = automatic
    int fo_max_iter = 400000;
    double fo_tol = 1e-9;        // relative duality-gap target for the first-order method
    std::optional<Vector> warm_start;
    std::optional<std::uint64_t> sweep_seed;  // shuffles the cyclic order when set
};

namespace detail {

// One-dimensional minimizer of q(b) + (lambda gamma/n)|b| with
// q(b) = q0 - 2 rho b + s b^2 held at the partial residual.
inline double solve_coordinate_lasso(double rho, double q0, double s, double lam_gamma,
                                     double n) {
    (void)q0;
    const double thr = lam_gamma / n;
    if (2.0 * std::abs(rho) <= thr) return 0.0;
    const double sign = rho > 0.0 ? 1.0 : -1.0;
    return sign * (2.0 * std::abs(rho) - thr) / (2.0 * s);
}

// One-dimensional minimizer of sqrt(q(b)) + (lambda gamma/n)|b|. Requires
// lambda gamma < n sqrt(s); otherwise the penalty slope exceeds the maximal
// slope of sqrt(q) and the coordinate problem is unbounded-flat, signalled as
// PenaltyTooLarge.
inline double solve_coordinate_sqrt(double rho, double q0, double s, double lam_gamma,
                                    double n, Eigen::Index j) {
    const double den = s - (lam_gamma / n) * (lam_gamma / n);
    if (den <= 0.0) throw PenaltyTooLarge(j);
    q0 = std::max(q0, 0.0);
    if (std::abs(rho) <= lam_gamma / n * std::sqrt(q0)) return 0.0;
    const double sign = rho > 0.0 ? 1.0 : -1.0;
    const double inner = std::max(s * q0 - rho * rho, 0.0) / den;
    return rho / s - sign * (lam_gamma / (n * s)) * std::sqrt(inner);
}

inline double operator_norm(const Matrix& x) {
    // power iteration on X'X; deterministic start
    Vector v = Vector::Ones(x.cols()).normalized();
    double norm_sq = 0.0;
    for (int it = 0; it < 100; ++it) {
        Vector w = x.transpose() * (x * v);
        norm_sq = w.norm();
        if (norm_sq <= 0.0) return 0.0;
        v = w / norm_sq;
    }
    return std::sqrt(norm_sq);
}

inline Vector project_to_ball(Vector v, double radius) {
    const double norm = v.norm();
    if (norm > radius) v *= radius / norm;
    return v;
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Componentwise updates (exposed for direct use and testing)
// ----------------------------------------------------------------------------

// Optimal beta_j for the known-sigma lasso criterion with the remaining
// coordinates fixed at beta (beta_j itself is ignored).
inline double cd_update_lasso(Eigen::Index j, const Vector& beta, const Dataset& data,
                              const PenaltyScheme& scheme) {
    if (beta.size() != data.p()) throw DimensionMismatch("beta length != p");
    Vector b = beta;
    b[j] = 0.0;
    const double n = static_cast<double>(data.n());
    const Vector r = data.y() - data.x() * b;
    const double rho = data.x().col(j).dot(r) / n;
    const double s = data.x().col(j).squaredNorm() / n;
    return detail::solve_coordinate_lasso(rho, r.squaredNorm() / n, s,
                                          scheme.lambda * scheme.loadings[j], n);
}

// Optimal beta_j for the square-root criterion with the remaining coordinates
// fixed. Throws PenaltyTooLarge when lambda gamma_j >= n sqrt(E_n[x_ij^2]).
inline double cd_update_sqrt(Eigen::Index j, const Vector& beta, const Dataset& data,
                             const PenaltyScheme& scheme) {
    if (beta.size() != data.p()) throw DimensionMismatch("beta length != p");
    Vector b = beta;
    b[j] = 0.0;
    const double n = static_cast<double>(data.n());
    const Vector r = data.y() - data.x() * b;
    const double rho = data.x().col(j).dot(r) / n;
    const double s = data.x().col(j).squaredNorm() / n;
    return detail::solve_coordinate_sqrt(rho, r.squaredNorm() / n, s,
                                         scheme.lambda * scheme.loadings[j], n, j);
}

// ----------------------------------------------------------------------------
// Cyclic coordinate descent
// ----------------------------------------------------------------------------

// Fits the lasso or square-root lasso criterion selected by scheme.kind.
// Residuals and their squared norm are maintained incrementally and fully
// recomputed every 50 sweeps to control drift. Stops when the sup-norm
// coordinate change within a sweep falls below options.tol. A fit that hits
// max_sweeps is returned with converged = false.
inline FitResult fit(const Dataset& data, const PenaltyScheme& scheme,
                     const SolverOptions& options = {}) {
    scheme.validate(data.p());
    if (options.max_sweeps < 1) throw InvalidParameter("max_sweeps must be >= 1");
    if (!(options.tol > 0.0)) throw InvalidParameter("tol must be positive");

    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    const double nd = static_cast<double>(n);
    const bool sqrt_obj = scheme.is_sqrt_objective();

    Vector col_sq(p);
    for (Eigen::Index j = 0; j < p; ++j) col_sq[j] = data.x().col(j).squaredNorm();

    // Coordinates with lambda gamma_j >= n sqrt(E_n[x_ij^2]) can never become
    // active: the penalty slope dominates the largest possible slope of
    // sqrt(qhat) along that coordinate, so zero is exact for them. They are
    // pinned and skipped; heavy-tail loading schemes produce such columns
    // routinely.
    std::vector<bool> pinned(static_cast<std::size_t>(p), false);
    if (sqrt_obj) {
        for (Eigen::Index j = 0; j < p; ++j) {
            const double lam_gamma = scheme.lambda * scheme.loadings[j];
            if (lam_gamma * lam_gamma >= nd * col_sq[j])
                pinned[static_cast<std::size_t>(j)] = true;
        }
    }

    Vector beta = Vector::Zero(p);
    if (options.warm_start) {
        if (options.warm_start->size() != p)
            throw DimensionMismatch("warm start length != p");
        beta = *options.warm_start;
        for (Eigen::Index j = 0; j < p; ++j)
            if (pinned[static_cast<std::size_t>(j)]) beta[j] = 0.0;
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    if (options.sweep_seed) {
        std::mt19937_64 gen(*options.sweep_seed);
        std::shuffle(order.begin(), order.end(), gen);
    }

    Vector r = data.y() - data.x() * beta;
    double rsq = r.squaredNorm();

    FitResult out;
    out.converged = false;
    int sweep = 0;
    for (; sweep < options.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j : order) {
            if (pinned[static_cast<std::size_t>(j)]) continue;
            const double d = data.x().col(j).dot(r);
            const double bj = beta[j];
            double rho_n = d;
            double q0_n = rsq;
            if (bj != 0.0) {
                rho_n += bj * col_sq[j];
                q0_n += 2.0 * bj * d + bj * bj * col_sq[j];
            }
            const double rho = rho_n / nd;
            const double q0 = q0_n / nd;
            const double s = col_sq[j] / nd;
            const double lam_gamma = scheme.lambda * scheme.loadings[j];
            const double b =
                sqrt_obj ? detail::solve_coordinate_sqrt(rho, q0, s, lam_gamma, nd, j)
                         : detail::solve_coordinate_lasso(rho, q0, s, lam_gamma, nd);
            if (b != bj) {
                const double delta = b - bj;
                r -= delta * data.x().col(j);
                rsq += -2.0 * delta * d + delta * delta * col_sq[j];
                rsq = std::max(rsq, 0.0);
                beta[j] = b;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if ((sweep + 1) % 50 == 0) {
            r = data.y() - data.x() * beta;
            rsq = r.squaredNorm();
        }
        if (max_change <= options.tol) {
            out.converged = true;
            ++sweep;
            break;
        }
    }

    out.beta = std::move(beta);
    out.support = support_of(out.beta);
    out.q_hat = q_hat(out.beta, data);
    out.objective = objective_value(out.beta, data, scheme);
    out.iterations = sweep;
    return out;
}

// ----------------------------------------------------------------------------
// First-order method
// ----------------------------------------------------------------------------

struct FirstOrderStats {
    int iterations = 0;
    double final_gap = 0.0;       // absolute duality gap at the stop
    double max_dual_norm = 0.0;   // largest ||z|| seen after a projection
};

// Primal-dual iteration on the saddle form of the square-root criterion:
// the dual iterate accumulates the scaled residual and is projected onto the
// ball ||z|| <= 1/sqrt(n); the primal iterate is soft-thresholded at
// tau lambda gamma_j / n and extrapolated. Steps come from the design
// operator norm; fo_smoothing > 0 overrides the primal step with 1/mu.
// Convergence is declared from the certified duality gap of the rescaled
// dual candidate a = n z.
inline FitResult fit_first_order(const Dataset& data, const PenaltyScheme& scheme,
                                 const SolverOptions& options = {},
                                 FirstOrderStats* stats = nullptr) {
    scheme.validate(data.p());
    if (!scheme.is_sqrt_objective())
        throw InvalidParameter("first-order method targets the square-root criterion");

    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    const double nd = static_cast<double>(n);
    const double radius = 1.0 / std::sqrt(nd);

    const double op_norm = std::max(detail::operator_norm(data.x()), 1e-12);
    const double tau = options.fo_smoothing > 0.0 ? 1.0 / options.fo_smoothing
                                                  : 1.0 / op_norm;
    const double sigma = 1.0 / (tau * op_norm * op_norm * 1.01);

    Vector beta = options.warm_start ? *options.warm_start : Vector::Zero(p);
    if (beta.size() != p) throw DimensionMismatch("warm start length != p");
    Vector beta_bar = beta;
    Vector z = Vector::Zero(n);

    FitResult out;
    out.converged = false;
    FirstOrderStats local;
    int it = 0;
    for (; it < options.fo_max_iter; ++it) {
        z = detail::project_to_ball(z + sigma * (data.y() - data.x() * beta_bar), radius);
        local.max_dual_norm = std::max(local.max_dual_norm, z.norm());

        const Vector grad = data.x().transpose() * z;
        Vector beta_new(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double v = beta[j] + tau * grad[j];
            const double thr = tau * scheme.lambda * scheme.loadings[j] / nd;
            beta_new[j] = std::copysign(std::max(std::abs(v) - thr, 0.0), v);
        }
        beta_bar = 2.0 * beta_new - beta;
        beta = std::move(beta_new);

        if ((it + 1) % 25 == 0) {
            const double primal = objective_value(beta, data, scheme);
            const double scale = feasibility_scale(nd * z, data, scheme);
            const double dual = scale * dual_value(nd * z, data);
            local.final_gap = primal - dual;
            if (local.final_gap <= options.fo_tol * (1.0 + std::abs(primal))) {
                out.converged = true;
                ++it;
                break;
            }
        }
    }

    out.beta = std::move(beta);
    out.support = support_of(out.beta);
    out.q_hat = q_hat(out.beta, data);
    out.objective = objective_value(out.beta, data, scheme);
    out.iterations = it;
    if (stats) {
        local.iterations = it;
        *stats = local;
    }
    return out;
}

// Dispatches on options.method.
inline FitResult fit_with(const Dataset& data, const PenaltyScheme& scheme,
                          const SolverOptions& options) {
    return options.method == SolverMethod::FirstOrder
               ? fit_first_order(data, scheme, options)
               : fit(data, scheme, options);
}

}  // namespace sqrtlasso
