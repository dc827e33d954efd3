#pragma once

// Independent reference computations used as test oracles. Everything here
// deliberately avoids the library's implementation paths: scalar loops,
// dense grid searches, bisection against erfc, and full support enumeration.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <vector>

#include "sqrtlasso/core.hpp"
#include "sqrtlasso/rng.hpp"

namespace oracles {

using sqrtlasso::Matrix;
using sqrtlasso::Vector;

// Inverse standard normal CDF by bisection on erfc; accurate to ~1e-14.
inline double normal_quantile_bisect(double q) {
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        (cdf < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Coarse-to-fine scan of a univariate function on [lo, hi].
inline double grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                            int levels = 8, int points = 2001) {
    double best_x = lo, best_v = f(lo);
    for (int level = 0; level < levels; ++level) {
        const double step = (hi - lo) / (points - 1);
        for (int i = 0; i < points; ++i) {
            const double x = lo + step * i;
            const double v = f(x);
            if (v < best_v) {
                best_v = v;
                best_x = x;
            }
        }
        lo = best_x - step;
        hi = best_x + step;
    }
    return best_x;
}

// Plain double loop for the prediction norm.
inline double prediction_norm_loop(const Vector& delta, const Matrix& x) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double dot = 0.0;
        for (Eigen::Index j = 0; j < x.cols(); ++j) dot += x(i, j) * delta[j];
        total += dot * dot;
    }
    return std::sqrt(total / static_cast<double>(x.rows()));
}

inline double q_hat_loop(const Vector& beta, const Vector& y, const Matrix& x) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double fit = 0.0;
        for (Eigen::Index j = 0; j < x.cols(); ++j) fit += x(i, j) * beta[j];
        const double r = y[i] - fit;
        total += r * r;
    }
    return total / static_cast<double>(x.rows());
}

// Extremal sparse eigenvalues by enumerating every off-support subset of every
// size up to m, each with its own dense eigensolve.
inline std::pair<double, double> sparse_eigs_bruteforce(
    const Matrix& gram, int m, const std::vector<Eigen::Index>& support_T) {
    const Eigen::Index p = gram.rows();
    std::vector<bool> in_t(static_cast<std::size_t>(p), false);
    for (Eigen::Index j : support_T) in_t[static_cast<std::size_t>(j)] = true;
    std::vector<Eigen::Index> off;
    for (Eigen::Index j = 0; j < p; ++j)
        if (!in_t[static_cast<std::size_t>(j)]) off.push_back(j);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const std::size_t f = off.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << f); ++mask) {
        if (static_cast<int>(__builtin_popcountll(mask)) > m) continue;
        std::vector<Eigen::Index> idx(support_T);
        for (std::size_t b = 0; b < f; ++b)
            if (mask & (std::size_t{1} << b)) idx.push_back(off[b]);
        if (idx.empty()) continue;
        Matrix sub(idx.size(), idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t c = 0; c < idx.size(); ++c)
                sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) =
                    gram(idx[a], idx[c]);
        Eigen::SelfAdjointEigenSolver<Matrix> es(sub, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
        hi = std::max(hi, es.eigenvalues().maxCoeff());
    }
    return {lo, hi};
}

// Gaussian test matrix with unit-second-moment columns.
inline Matrix random_normalized_design(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    sqrtlasso::Rng rng(seed);
    Matrix x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.gaussian();
    for (Eigen::Index j = 0; j < p; ++j) {
        const double scale =
            std::sqrt(x.col(j).squaredNorm() / static_cast<double>(n));
        x.col(j) /= scale;
    }
    return x;
}

// Orthonormalized design rescaled so every column has unit second moment.
inline Matrix orthonormalized_design(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    sqrtlasso::Rng rng(seed);
    Matrix g(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, p);
    return q * std::sqrt(static_cast<double>(n));
}

inline Vector random_gaussian_vector(Eigen::Index n, std::uint64_t seed) {
    sqrtlasso::Rng rng(seed);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gaussian();
    return v;
}

}  // namespace oracles
