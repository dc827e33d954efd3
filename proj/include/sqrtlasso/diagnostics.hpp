#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "sqrtlasso/core.hpp"
#include "sqrtlasso/rng.hpp"

namespace sqrtlasso {

// ----------------------------------------------------------------------------
// Sparse eigenvalues
// ----------------------------------------------------------------------------

struct SparseEigOptions {
    double max_enumeration = 1e6;
    bool allow_randomized = false;  // subsample supports instead of throwing
    int random_samples = 20000;
    std::uint64_t seed = 1;
};

struct SparseEigResult {
    double phi_min = 0.0;
    double phi_max = 0.0;
    bool exact = true;
    double n_supports = 0.0;  // enumerated or sampled support count
};

namespace detail {

inline double binomial_count(Eigen::Index n, Eigen::Index k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (Eigen::Index i = 1; i <= k; ++i) {
        c *= static_cast<double>(n - k + i) / static_cast<double>(i);
        if (c > 1e18) return 1e18;
    }
    return c;
}

inline std::pair<double, double> extremal_eigs(const Matrix& gram,
                                               const std::vector<Eigen::Index>& idx) {
    Matrix sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b)
            sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                gram(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sub, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace detail

// Extremal Rayleigh quotients of the gram matrix over vectors with at most m
// nonzero coordinates outside support_T. Exact by enumeration of off-support
// subsets; the minimum and maximum are attained on subsets of maximal size,
// so only those are visited. Beyond max_enumeration subsets the call throws
// EnumerationTooLarge unless allow_randomized is set, in which case a seeded
// subsample of supports is scanned and the result is flagged inexact.
inline SparseEigResult sparse_eigenvalues(const Matrix& gram, int m,
                                          const std::vector<Eigen::Index>& support_T,
                                          SparseEigOptions opts = {}) {
    const Eigen::Index p = gram.rows();
    if (gram.cols() != p) throw DimensionMismatch("gram must be square");
    if (m < 0) throw InvalidParameter("m must be nonnegative");
    if (m == 0 && support_T.empty())
        throw InvalidParameter("m = 0 with empty support admits only delta = 0");

    std::vector<bool> in_t(static_cast<std::size_t>(p), false);
    for (Eigen::Index j : support_T) {
        if (j < 0 || j >= p) throw InvalidParameter("support index out of range");
        in_t[static_cast<std::size_t>(j)] = true;
    }
    std::vector<Eigen::Index> off;
    for (Eigen::Index j = 0; j < p; ++j)
        if (!in_t[static_cast<std::size_t>(j)]) off.push_back(j);

    const Eigen::Index k = std::min<Eigen::Index>(m, static_cast<Eigen::Index>(off.size()));
    const double count = detail::binomial_count(static_cast<Eigen::Index>(off.size()), k);

    SparseEigResult out;
    out.phi_min = std::numeric_limits<double>::infinity();
    out.phi_max = -std::numeric_limits<double>::infinity();

    std::vector<Eigen::Index> idx(support_T);
    idx.resize(support_T.size() + static_cast<std::size_t>(k));

    auto visit = [&](const std::vector<Eigen::Index>& pick) {
        for (Eigen::Index i = 0; i < k; ++i)
            idx[support_T.size() + static_cast<std::size_t>(i)] =
                off[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
        const auto [lo, hi] = detail::extremal_eigs(gram, idx);
        out.phi_min = std::min(out.phi_min, lo);
        out.phi_max = std::max(out.phi_max, hi);
    };

    if (count <= opts.max_enumeration) {
        out.exact = true;
        out.n_supports = count;
        std::vector<Eigen::Index> pick(static_cast<std::size_t>(k));
        std::iota(pick.begin(), pick.end(), Eigen::Index{0});
        const Eigen::Index f = static_cast<Eigen::Index>(off.size());
        while (true) {
            visit(pick);
            Eigen::Index i = k - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == f - k + i) --i;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
            for (Eigen::Index t = i + 1; t < k; ++t)
                pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
        }
    } else {
        if (!opts.allow_randomized) throw EnumerationTooLarge(count, opts.max_enumeration);
        out.exact = false;
        out.n_supports = opts.random_samples;
        Rng rng(opts.seed);
        const Eigen::Index f = static_cast<Eigen::Index>(off.size());
        std::vector<Eigen::Index> pool(static_cast<std::size_t>(f));
        for (int s = 0; s < opts.random_samples; ++s) {
            std::iota(pool.begin(), pool.end(), Eigen::Index{0});
            std::vector<Eigen::Index> pick(static_cast<std::size_t>(k));
            for (Eigen::Index i = 0; i < k; ++i) {
                const auto r = static_cast<std::size_t>(rng.raw() % (f - i));
                pick[static_cast<std::size_t>(i)] = pool[r];
                std::swap(pool[r], pool[static_cast<std::size_t>(f - i) - 1]);
            }
            visit(pick);
        }
    }
    return out;
}

// ----------------------------------------------------------------------------
// Restricted-eigenvalue lower bound
// ----------------------------------------------------------------------------

// Lower bound on the restricted eigenvalue from sparse-eigenvalue tables:
// max over m of sqrt(phi_min(m))/||Gamma||_inf (1 - sqrt(phi_max/phi_min) cbar sqrt(s/m)),
// floored at zero when every candidate is negative.
inline double re_lower_bound(const std::map<int, double>& phi_min,
                             const std::map<int, double>& phi_max, Eigen::Index s,
                             double c_bar, double loadings_sup) {
    if (!(loadings_sup > 0.0)) throw InvalidParameter("loadings_sup must be positive");
    double best = 0.0;
    for (const auto& [m, lo] : phi_min) {
        if (m < 1 || lo <= 0.0) continue;
        const auto hi_it = phi_max.find(m);
        if (hi_it == phi_max.end()) continue;
        const double ratio = std::sqrt(hi_it->second / lo);
        const double val = std::sqrt(lo) / loadings_sup *
                           (1.0 - ratio * c_bar * std::sqrt(static_cast<double>(s) /
                                                            static_cast<double>(m)));
        best = std::max(best, val);
    }
    return best;
}

// ----------------------------------------------------------------------------
// Sampled cone estimates
// ----------------------------------------------------------------------------

struct ConeEstimate {
    double value = 0.0;
    Vector argopt;  // direction attaining the reported bound
};

namespace detail {

// Ratio state for incremental coordinate polishing over a quadratic form.
struct ConeState {
    const Matrix* gram;
    const Vector* loadings;
    std::vector<bool> on_t;
    Vector delta;
    Vector gram_delta;
    double quad = 0.0;  // delta' G delta
    double l1_t = 0.0;  // ||Gamma delta_T||_1
    double l1_tc = 0.0; // ||Gamma delta_Tc||_1

    void reset(const Vector& d) {
        delta = d;
        gram_delta = (*gram) * d;
        quad = d.dot(gram_delta);
        l1_t = l1_tc = 0.0;
        for (Eigen::Index j = 0; j < d.size(); ++j) {
            const double w = (*loadings)[j] * std::abs(d[j]);
            (on_t[static_cast<std::size_t>(j)] ? l1_t : l1_tc) += w;
        }
    }

    // Applies delta_j += t.
    void shift(Eigen::Index j, double t) {
        quad += 2.0 * t * gram_delta[j] + t * t * (*gram)(j, j);
        const double before = (*loadings)[j] * std::abs(delta[j]);
        delta[j] += t;
        const double after = (*loadings)[j] * std::abs(delta[j]);
        (on_t[static_cast<std::size_t>(j)] ? l1_t : l1_tc) += after - before;
        gram_delta += t * gram->col(j);
    }

    // Value of quad if delta_j were shifted by t, without committing.
    double quad_if(Eigen::Index j, double t) const {
        return quad + 2.0 * t * gram_delta[j] + t * t * (*gram)(j, j);
    }
};

}  // namespace detail

// Stochastic upper bound on the weighted restricted eigenvalue
//   inf sqrt(s) ||delta||_{2,n} / (||Gamma delta_T||_1 - ||Gamma delta_Tc||_1)
// over the open cone ||Gamma delta_Tc||_1 < ||Gamma delta_T||_1, using seeded
// random directions plus greedy coordinate polishing. Deterministic under a
// fixed seed. extra_candidates are evaluated alongside the random draws.
inline ConeEstimate estimate_kappa_bar(const Matrix& gram, const Vector& loadings,
                                       const std::vector<Eigen::Index>& support_T,
                                       int n_samples, std::uint64_t seed,
                                       const std::vector<Vector>* extra_candidates = nullptr) {
    const Eigen::Index p = gram.rows();
    if (support_T.empty())
        throw EmptySupport("kappa-bar is undefined for an empty oracle support");
    if (loadings.size() != p) throw DimensionMismatch("loadings length != p");
    if (n_samples < 1) throw InvalidParameter("n_samples must be >= 1");

    const double sqrt_s = std::sqrt(static_cast<double>(support_T.size()));
    detail::ConeState st;
    st.gram = &gram;
    st.loadings = &loadings;
    st.on_t.assign(static_cast<std::size_t>(p), false);
    for (Eigen::Index j : support_T) st.on_t[static_cast<std::size_t>(j)] = true;

    auto ratio = [&]() -> double {
        const double denom = st.l1_t - st.l1_tc;
        if (denom <= 1e-12 * std::max(st.l1_t, 1.0)) return std::numeric_limits<double>::infinity();
        return sqrt_s * std::sqrt(std::max(st.quad, 0.0)) / denom;
    };

    ConeEstimate best;
    best.value = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& d) {
        st.reset(d);
        const double v = ratio();
        if (v < best.value) {
            best.value = v;
            best.argopt = d;
        }
    };

    // Canonical candidates: the equal-weight direction on T and each single
    // support coordinate. These pin the orthonormal closed form exactly.
    {
        Vector d = Vector::Zero(p);
        for (Eigen::Index j : support_T) d[j] = 1.0 / loadings[j];
        consider(d);
        for (Eigen::Index j : support_T) {
            Vector e = Vector::Zero(p);
            e[j] = 1.0;
            consider(e);
        }
    }
    if (extra_candidates)
        for (const Vector& d : *extra_candidates)
            if (d.size() == p) consider(d);

    Rng rng(seed);
    Vector work = Vector::Zero(p);
    for (int s = 0; s < n_samples; ++s) {
        work.setZero();
        double l1t = 0.0;
        for (Eigen::Index j : support_T) {
            work[j] = rng.gaussian();
            l1t += loadings[j] * std::abs(work[j]);
        }
        if (l1t <= 0.0) continue;
        // fill the off-support block to a random fraction of the T mass
        const double theta = 0.95 * rng.uniform();
        double l1tc = 0.0;
        Vector off_draw = Vector::Zero(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            if (st.on_t[static_cast<std::size_t>(j)]) continue;
            off_draw[j] = rng.gaussian();
            l1tc += loadings[j] * std::abs(off_draw[j]);
        }
        if (l1tc > 0.0) work += off_draw * (theta * l1t / l1tc);
        consider(work);
    }

    // Greedy coordinate polish from the best direction found.
    if (best.argopt.size() == p && std::isfinite(best.value)) {
        st.reset(best.argopt);
        double cur = ratio();
        double step = 0.5;
        for (int round = 0; round < 40; ++round) {
            bool improved = false;
            for (Eigen::Index j = 0; j < p; ++j) {
                const double scale = std::max(std::abs(st.delta[j]), st.l1_t / sqrt_s + 1e-12);
                for (const double dir : {1.0, -1.0}) {
                    const double t = dir * step * scale;
                    st.shift(j, t);
                    const double v = ratio();
                    if (v < cur) {
                        cur = v;
                        improved = true;
                    } else {
                        st.shift(j, -t);
                    }
                }
            }
            if (!improved) step *= 0.5;
            if (step < 1e-8) break;
        }
        if (cur < best.value) {
            best.value = cur;
            best.argopt = st.delta;
        }
    }
    return best;
}

inline ConeEstimate estimate_kappa_bar(const Dataset& data, const Vector& loadings,
                                       const std::vector<Eigen::Index>& support_T,
                                       int n_samples, std::uint64_t seed,
                                       const std::vector<Vector>* extra_candidates = nullptr) {
    const Matrix gram =
        data.x().transpose() * data.x() / static_cast<double>(data.n());
    return estimate_kappa_bar(gram, loadings, support_T, n_samples, seed, extra_candidates);
}

// Sampled lower bound on the score modulus
//   sup |score' delta| / ||delta||_{2,n}
// over the restricted set ||Gamma delta_Tc||_1 <= cbar ||Gamma delta_T||_1.
// The ratio is scale invariant, so directions are sampled in the cone and
// polished coordinatewise.
inline ConeEstimate estimate_varrho(const Matrix& gram, const Vector& score,
                                    const Vector& loadings,
                                    const std::vector<Eigen::Index>& support_T,
                                    double c_bar, int n_samples, std::uint64_t seed) {
    const Eigen::Index p = gram.rows();
    if (support_T.empty())
        throw EmptySupport("the restricted set is empty for an empty oracle support");
    if (score.size() != p || loadings.size() != p)
        throw DimensionMismatch("score/loadings length != p");
    if (!(c_bar >= 1.0)) throw InvalidParameter("c_bar must be >= 1");

    detail::ConeState st;
    st.gram = &gram;
    st.loadings = &loadings;
    st.on_t.assign(static_cast<std::size_t>(p), false);
    for (Eigen::Index j : support_T) {
        if (j < 0 || j >= p) throw InvalidParameter("support index out of range");
        st.on_t[static_cast<std::size_t>(j)] = true;
    }

    double inner = 0.0;  // score' delta, maintained alongside st
    auto ratio = [&]() -> double {
        if (st.l1_tc > c_bar * st.l1_t * (1.0 + 1e-12)) return -1.0;  // infeasible
        const double norm = std::sqrt(std::max(st.quad, 0.0));
        if (norm <= 0.0) return -1.0;
        return std::abs(inner) / norm;
    };

    ConeEstimate best;
    best.value = 0.0;
    auto consider = [&](const Vector& d) {
        st.reset(d);
        inner = score.dot(d);
        const double v = ratio();
        if (v > best.value) {
            best.value = v;
            best.argopt = d;
        }
    };

    // Scaled sign-of-score directions and single coordinates seed the search.
    {
        Vector d = Vector::Zero(p);
        for (Eigen::Index j : support_T)
            d[j] = (score[j] >= 0.0 ? 1.0 : -1.0) / loadings[j];
        consider(d);
        for (Eigen::Index j : support_T) {
            Vector e = Vector::Zero(p);
            e[j] = 1.0;
            consider(e);
        }
    }

    Rng rng(seed);
    Vector work = Vector::Zero(p);
    for (int s = 0; s < n_samples; ++s) {
        work.setZero();
        double l1t = 0.0;
        for (Eigen::Index j : support_T) {
            work[j] = rng.gaussian();
            l1t += loadings[j] * std::abs(work[j]);
        }
        if (l1t <= 0.0) continue;
        const double theta = c_bar * rng.uniform();
        double l1tc = 0.0;
        Vector off_draw = Vector::Zero(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            if (st.on_t[static_cast<std::size_t>(j)]) continue;
            off_draw[j] = rng.gaussian();
            l1tc += loadings[j] * std::abs(off_draw[j]);
        }
        if (l1tc > 0.0) work += off_draw * (theta * l1t / l1tc);
        consider(work);
    }

    if (best.argopt.size() == p) {
        st.reset(best.argopt);
        inner = score.dot(best.argopt);
        double cur = ratio();
        double step = 0.5;
        for (int round = 0; round < 40; ++round) {
            bool improved = false;
            for (Eigen::Index j = 0; j < p; ++j) {
                const double scale = std::max(std::abs(st.delta[j]), st.l1_t + 1e-12);
                for (const double dir : {1.0, -1.0}) {
                    const double t = dir * step * scale;
                    st.shift(j, t);
                    inner += t * score[j];
                    const double v = ratio();
                    if (v > cur) {
                        cur = v;
                        improved = true;
                    } else {
                        st.shift(j, -t);
                        inner -= t * score[j];
                    }
                }
            }
            if (!improved) step *= 0.5;
            if (step < 1e-8) break;
        }
        if (cur > best.value) {
            best.value = cur;
            best.argopt = st.delta;
        }
    }
    return best;
}

// ----------------------------------------------------------------------------
// Score and penalty-domination event
// ----------------------------------------------------------------------------

// Rescaled score S = E_n[x_i u_i]/sqrt(E_n[u_i^2]) of the square-root
// criterion at the oracle target, where u is the composite error sigma*eps + r.
inline Vector score_vector(const Matrix& x, const Vector& composite_error) {
    if (composite_error.size() != x.rows())
        throw DimensionMismatch("composite error length != n");
    const double n = static_cast<double>(x.rows());
    const double scale = std::sqrt(composite_error.squaredNorm() / n);
    if (scale <= 0.0) throw ZeroCompositeError();
    return (x.transpose() * composite_error) / n / scale;
}

inline Vector score_vector(const Dataset& data, const Vector& composite_error) {
    return score_vector(data.x(), composite_error);
}

// True iff lambda/n >= c * max_j |score_j| / gamma_j.
inline bool event_check(double lambda, Eigen::Index n, double c, const Vector& score,
                        const Vector& loadings) {
    if (score.size() != loadings.size())
        throw DimensionMismatch("score/loadings length mismatch");
    double sup = 0.0;
    for (Eigen::Index j = 0; j < score.size(); ++j)
        sup = std::max(sup, std::abs(score[j]) / loadings[j]);
    return lambda / static_cast<double>(n) >= c * sup;
}

inline bool event_check(const PenaltyScheme& scheme, Eigen::Index n, const Vector& score,
                        const Vector& loadings) {
    return event_check(scheme.lambda, n, scheme.params.c, score, loadings);
}

// ----------------------------------------------------------------------------
// Design report
// ----------------------------------------------------------------------------

struct DesignReport {
    std::map<int, double> phi_min;
    std::map<int, double> phi_max;
    double re_lower_bound = 0.0;
    std::optional<double> kappa_bar_estimate;
    std::optional<double> varrho_estimate;
    std::optional<bool> event_holds;
    std::optional<double> score_sup;
    bool exact_enumeration = true;
    double enumeration_count = 0.0;
};

struct DesignReportOptions {
    std::vector<int> m_values = {1, 2, 3, 4};
    std::vector<Eigen::Index> support_T;
    double c_bar = 3.0;
    int n_samples = 2000;
    std::uint64_t seed = 1;
    SparseEigOptions eig;
};

// Gram-based design diagnostics: sparse-eigenvalue tables for the requested
// m values, the restricted-eigenvalue lower bound, and the sampled kappa-bar
// estimate when a support is given. Loadings default to all ones.
inline DesignReport design_report(const Matrix& gram, const Vector& loadings,
                                  const DesignReportOptions& opts) {
    DesignReport rep;
    for (int m : opts.m_values) {
        if (m == 0 && opts.support_T.empty()) continue;
        SparseEigResult r = sparse_eigenvalues(gram, m, opts.support_T, opts.eig);
        rep.phi_min[m] = r.phi_min;
        rep.phi_max[m] = r.phi_max;
        rep.exact_enumeration = rep.exact_enumeration && r.exact;
        rep.enumeration_count += r.n_supports;
    }
    const double sup_load = loadings.size() > 0 ? loadings.maxCoeff() : 1.0;
    rep.re_lower_bound = re_lower_bound(rep.phi_min, rep.phi_max,
                                        static_cast<Eigen::Index>(opts.support_T.size()),
                                        opts.c_bar, sup_load);
    if (!opts.support_T.empty()) {
        rep.kappa_bar_estimate =
            estimate_kappa_bar(gram, loadings, opts.support_T, opts.n_samples, opts.seed)
                .value;
    }
    return rep;
}

}  // namespace sqrtlasso
