#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sqrtlasso/core.hpp"
#include "sqrtlasso/diagnostics.hpp"
#include "sqrtlasso/penalty.hpp"
#include "sqrtlasso/postsel.hpp"
#include "sqrtlasso/rng.hpp"
#include "sqrtlasso/solvers.hpp"

namespace sqrtlasso {

// ----------------------------------------------------------------------------
// Data-generating processes
// ----------------------------------------------------------------------------

// Rows are independent draws from N(0, Sigma) with Sigma_{jk} = rho^|j-k|,
// generated by the AR(1) recursion. Returns the raw (unnormalized) design.
inline Matrix gen_design(Eigen::Index n, Eigen::Index p, double rho, std::uint64_t seed) {
    if (n < 1 || p < 1) throw InvalidParameter("n and p must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw InvalidParameter("rho must be in [0,1)");
    Rng rng(seed);
    Matrix x(n, p);
    const double carry = std::sqrt(1.0 - rho * rho);
    for (Eigen::Index i = 0; i < n; ++i) {
        double prev = rng.gaussian();
        x(i, 0) = prev;
        for (Eigen::Index j = 1; j < p; ++j) {
            prev = rho * prev + carry * rng.gaussian();
            x(i, j) = prev;
        }
    }
    return x;
}

enum class ErrorLaw { Gaussian, T4Scaled, HeteroskedasticGaussian, T2 };

inline const char* to_string(ErrorLaw law) {
    switch (law) {
        case ErrorLaw::Gaussian: return "gaussian";
        case ErrorLaw::T4Scaled: return "t4_scaled";
        case ErrorLaw::HeteroskedasticGaussian: return "heteroskedastic_gaussian";
        case ErrorLaw::T2: return "t2";
    }
    return "gaussian";
}

struct GeneratedErrors {
    Vector eps;      // standardized disturbances
    Vector sigma_i;  // per-observation scales; the noise added to f is sigma_i * eps
};

// Draws the disturbances for one replication. Homoskedastic laws return
// sigma_i identically equal to sigma; the heteroskedastic law returns
// sigma_i^2 = sigma^2 (1 + x_i'beta*)^2 / E_n[(1 + x_i'beta*)^2], whose
// sample mean square equals sigma^2 exactly. t(4)/sqrt(2) has unit variance;
// t(2) is used as-is despite its infinite variance.
inline GeneratedErrors gen_errors(Eigen::Index n, ErrorLaw law, double sigma,
                                  const Matrix& raw_design, const Vector& beta_star,
                                  std::uint64_t seed) {
    if (sigma < 0.0) throw InvalidParameter("sigma must be nonnegative");
    Rng rng(seed);
    GeneratedErrors out;
    out.eps = Vector(n);
    switch (law) {
        case ErrorLaw::Gaussian:
        case ErrorLaw::HeteroskedasticGaussian:
            for (Eigen::Index i = 0; i < n; ++i) out.eps[i] = rng.gaussian();
            break;
        case ErrorLaw::T4Scaled:
            for (Eigen::Index i = 0; i < n; ++i)
                out.eps[i] = rng.student_t(4) / std::sqrt(2.0);
            break;
        case ErrorLaw::T2:
            for (Eigen::Index i = 0; i < n; ++i) out.eps[i] = rng.student_t(2);
            break;
    }
    if (law == ErrorLaw::HeteroskedasticGaussian) {
        if (beta_star.size() != raw_design.cols())
            throw DimensionMismatch("beta_star length != p");
        const Vector shift = (raw_design * beta_star).array() + 1.0;
        const double mean_sq = shift.squaredNorm() / static_cast<double>(n);
        if (mean_sq <= 0.0) throw InvalidParameter("degenerate heteroskedastic scale");
        out.sigma_i = sigma * shift.cwiseAbs() / std::sqrt(mean_sq);
    } else {
        out.sigma_i = Vector::Constant(n, sigma);
    }
    return out;
}

// ----------------------------------------------------------------------------
// Oracle target
// ----------------------------------------------------------------------------

enum class OracleMode { Auto, Nested, Exhaustive };

struct OracleOptions {
    Eigen::Index k_max = 0;  // 0 = min(n, p)
    OracleMode mode = OracleMode::Auto;
    double exhaustive_limit = 1e5;  // max subsets for the combinatorial search
};

namespace detail {

inline double subsets_up_to(Eigen::Index p, Eigen::Index k) {
    double total = 0.0;
    for (Eigen::Index i = 0; i <= k; ++i) {
        total += binomial_count(p, i);
        if (total > 1e18) return total;
    }
    return total;
}

}  // namespace detail

// Minimizes the oracle tradeoff  (LS error of f on a support) + sigma^2 k / n
// over supports. The nested route orders columns by |E_n[x_j f]| once and
// scans the top-k prefixes with an incremental orthogonalization; it stops as
// soon as the complexity term alone exceeds the best objective. The
// exhaustive route enumerates every support of size <= k_max and is chosen
// automatically when that enumeration is small.
inline OracleTarget oracle_target(const Vector& f, const Matrix& x, double sigma,
                                  OracleOptions opts = {}) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (f.size() != n) throw DimensionMismatch("f length != n");
    if (!f.allFinite()) throw InvalidParameter("f must be finite");
    const Eigen::Index k_max =
        opts.k_max > 0 ? std::min(opts.k_max, std::min(n, p)) : std::min(n, p);
    const double nd = static_cast<double>(n);
    const double var_step = sigma * sigma / nd;

    bool exhaustive = opts.mode == OracleMode::Exhaustive;
    if (opts.mode == OracleMode::Auto)
        exhaustive = detail::subsets_up_to(p, k_max) <= opts.exhaustive_limit;

    std::vector<Eigen::Index> best_support;
    double best_obj = f.squaredNorm() / nd;  // empty support

    if (exhaustive) {
        std::vector<Eigen::Index> subset;
        // depth-first enumeration of supports of size <= k_max
        auto recurse = [&](auto&& self, Eigen::Index start) -> void {
            if (!subset.empty()) {
                Matrix xs(n, static_cast<Eigen::Index>(subset.size()));
                for (std::size_t a = 0; a < subset.size(); ++a)
                    xs.col(static_cast<Eigen::Index>(a)) = x.col(subset[a]);
                const Vector coef =
                    Eigen::CompleteOrthogonalDecomposition<Matrix>(xs).solve(f);
                const double err = (f - xs * coef).squaredNorm() / nd;
                const double obj = err + var_step * static_cast<double>(subset.size());
                if (obj < best_obj) {
                    best_obj = obj;
                    best_support = subset;
                }
            }
            if (static_cast<Eigen::Index>(subset.size()) >= k_max) return;
            for (Eigen::Index j = start; j < p; ++j) {
                subset.push_back(j);
                self(self, j + 1);
                subset.pop_back();
            }
        };
        recurse(recurse, 0);
    } else {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        Vector corr = (x.transpose() * f).cwiseAbs();
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return corr[a] > corr[b]; });

        Matrix q(n, k_max);
        Eigen::Index rank = 0;
        Vector resid = f;
        for (Eigen::Index k = 1; k <= k_max; ++k) {
            Vector v = x.col(order[static_cast<std::size_t>(k - 1)]);
            for (int pass = 0; pass < 2; ++pass)
                if (rank > 0) v -= q.leftCols(rank) * (q.leftCols(rank).transpose() * v);
            const double norm = v.norm();
            if (norm > 1e-10 * std::sqrt(nd)) {
                q.col(rank) = v / norm;
                resid -= q.col(rank) * q.col(rank).dot(resid);
                ++rank;
            }
            const double obj = resid.squaredNorm() / nd + var_step * static_cast<double>(k);
            if (obj < best_obj) {
                best_obj = obj;
                best_support.assign(order.begin(), order.begin() + k);
            }
            if (var_step * static_cast<double>(k + 1) >= best_obj) break;
        }
        std::sort(best_support.begin(), best_support.end());
    }

    OracleTarget out;
    out.beta0 = Vector::Zero(p);
    if (!best_support.empty()) {
        Matrix xs(n, static_cast<Eigen::Index>(best_support.size()));
        for (std::size_t a = 0; a < best_support.size(); ++a)
            xs.col(static_cast<Eigen::Index>(a)) = x.col(best_support[a]);
        const Vector coef = Eigen::CompleteOrthogonalDecomposition<Matrix>(xs).solve(f);
        for (std::size_t a = 0; a < best_support.size(); ++a)
            out.beta0[best_support[a]] = coef[static_cast<Eigen::Index>(a)];
    }
    out.support_T = support_of(out.beta0);
    out.s = static_cast<Eigen::Index>(out.support_T.size());
    out.c_s = std::sqrt((f - x * out.beta0).squaredNorm() / nd);
    return out;
}

// ----------------------------------------------------------------------------
// Monte Carlo configuration and report
// ----------------------------------------------------------------------------

enum class Estimator {
    LassoKnownSigma,
    OlsPostLasso,
    SqrtLasso,
    OlsPostSqrtLasso,
    IdealSqrtLasso,
    OlsPostIdealSqrtLasso,
    OracleEstimator,
};

inline const char* to_string(Estimator e) {
    switch (e) {
        case Estimator::LassoKnownSigma: return "lasso_known_sigma";
        case Estimator::OlsPostLasso: return "ols_post_lasso";
        case Estimator::SqrtLasso: return "sqrt_lasso";
        case Estimator::OlsPostSqrtLasso: return "ols_post_sqrt_lasso";
        case Estimator::IdealSqrtLasso: return "ideal_sqrt_lasso";
        case Estimator::OlsPostIdealSqrtLasso: return "ols_post_ideal_sqrt_lasso";
        case Estimator::OracleEstimator: return "oracle";
    }
    return "unknown";
}

enum class BetaStarRule { InvJ32, InvJ2, Custom };

// How the square-root lasso penalty is configured inside the harness.
enum class LoadingRule { UnitLoadings, Algorithm1, SymmetricScheme };

inline const char* to_string(BetaStarRule r) {
    switch (r) {
        case BetaStarRule::InvJ32: return "inv_j_3_2";
        case BetaStarRule::InvJ2: return "inv_j_2";
        case BetaStarRule::Custom: return "custom";
    }
    return "custom";
}

inline const char* to_string(LoadingRule r) {
    switch (r) {
        case LoadingRule::UnitLoadings: return "unit_loadings";
        case LoadingRule::Algorithm1: return "algorithm1";
        case LoadingRule::SymmetricScheme: return "symmetric_scheme";
    }
    return "unit_loadings";
}

struct McConfig {
    Eigen::Index n = 100;
    Eigen::Index p = 500;
    double rho_toeplitz = 0.5;
    BetaStarRule beta_star_rule = BetaStarRule::InvJ32;
    Vector custom_beta_star;  // used when beta_star_rule == Custom
    ErrorLaw error_law = ErrorLaw::Gaussian;
    std::vector<double> sigma_grid = {1.0};
    int n_reps = 100;
    std::uint64_t seed = 0;
    std::vector<Estimator> estimators = {Estimator::SqrtLasso, Estimator::OlsPostSqrtLasso};
    LoadingRule loading_rule = LoadingRule::UnitLoadings;
    double mc_alpha = 0.05;  // penalty confidence parameter for the simple rules
    double mc_c = 1.1;       // slack constant for the simple rules
    double lambda_override = 0.0;  // > 0 fixes the sqrt-lasso level directly
    int threads = 0;               // 0 = hardware concurrency
    SolverOptions solver;

    Vector beta_star() const {
        if (beta_star_rule == BetaStarRule::Custom) {
            if (custom_beta_star.size() != p)
                throw InvalidParameter("custom beta_star length != p");
            return custom_beta_star;
        }
        Vector b(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double jj = static_cast<double>(j + 1);
            b[j] = beta_star_rule == BetaStarRule::InvJ32 ? 1.0 / std::pow(jj, 1.5)
                                                          : 1.0 / (jj * jj);
        }
        return b;
    }

    void validate() const {
        if (n < 1 || p < 1) throw InvalidParameter("n and p must be >= 1");
        if (!(rho_toeplitz >= 0.0 && rho_toeplitz < 1.0))
            throw InvalidParameter("rho_toeplitz must be in [0,1)");
        if (n_reps < 1) throw InvalidParameter("n_reps must be >= 1");
        if (sigma_grid.empty()) throw InvalidParameter("sigma grid is empty");
        for (double s : sigma_grid)
            if (s < 0.0) throw InvalidParameter("sigma must be nonnegative");
        if (estimators.empty()) throw InvalidParameter("no estimators requested");
    }
};

struct McCell {
    Estimator estimator{};
    double sigma = 0.0;
    double mean_risk = 0.0;       // mean of ||beta - beta0||_{2,n}
    double bias_norm = 0.0;       // ||mean(beta - beta0)||_2
    double mean_support = 0.0;
    std::optional<double> event_coverage;  // sqrt-family estimators only
    int n_failed = 0;
    int n_ok = 0;
    std::vector<double> risks;  // per-replication risks, in replication order
};

struct McReport {
    McConfig config;
    std::vector<McCell> cells;  // one per (estimator, sigma), sigma-major order

    const McCell& cell(Estimator e, double sigma) const {
        for (const auto& c : cells)
            if (c.estimator == e && c.sigma == sigma) return c;
        throw InvalidParameter("no cell for requested estimator/sigma");
    }
};

// ----------------------------------------------------------------------------
// The experiment runner
// ----------------------------------------------------------------------------

namespace detail {

struct RepOutcome {
    bool failed = false;
    double risk = 0.0;
    double support = 0.0;
    Vector delta;  // beta - beta0, for the bias accumulation
    std::optional<bool> event;
};

struct RepBundle {
    // indexed [sigma][estimator]
    std::vector<std::vector<RepOutcome>> outcomes;
};

inline bool is_sqrt_family(Estimator e) {
    return e == Estimator::SqrtLasso || e == Estimator::IdealSqrtLasso;
}

}  // namespace detail

// Runs the Monte Carlo study. Replications are independent; each draws its
// streams from seeds derived from (config.seed, replication index), so the
// report is identical for any thread count.
inline McReport run_mc(const McConfig& config) {
    config.validate();
    const Vector beta_star = config.beta_star();
    const std::size_t n_sigma = config.sigma_grid.size();
    const std::size_t n_est = config.estimators.size();

    std::vector<detail::RepBundle> bundles(static_cast<std::size_t>(config.n_reps));

    auto run_rep = [&](int rep) {
        detail::RepBundle& bundle = bundles[static_cast<std::size_t>(rep)];
        bundle.outcomes.assign(n_sigma, std::vector<detail::RepOutcome>(n_est));

        const std::uint64_t rep_seed = derive_seed(config.seed, static_cast<std::uint64_t>(rep));
        const Matrix raw_x =
            gen_design(config.n, config.p, config.rho_toeplitz, derive_seed(rep_seed, 0));
        const Vector f = raw_x * beta_star;

        for (std::size_t si = 0; si < n_sigma; ++si) {
            const double sigma = config.sigma_grid[si];
            GeneratedErrors err = gen_errors(config.n, config.error_law, sigma, raw_x,
                                             beta_star, derive_seed(rep_seed, 1 + si));
            const Vector y = f + err.sigma_i.cwiseProduct(err.eps);
            const Dataset data(y, raw_x);
            const OracleTarget oracle = oracle_target(f, data.x(), sigma);
            const Vector composite = y - data.x() * oracle.beta0;
            const Vector noise = err.sigma_i.cwiseProduct(err.eps);

            // Penalty schemes shared across estimators of this cell.
            PenaltyScheme sqrt_scheme;
            FitResult sqrt_fit;
            bool sqrt_ready = false;
            PenaltyScheme ideal_scheme;
            FitResult ideal_fit;
            bool ideal_ready = false;
            PenaltyScheme lasso_scheme;
            FitResult lasso_fit;
            bool lasso_ready = false;

            auto make_sqrt_scheme = [&]() -> PenaltyScheme {
                PenaltyScheme s;
                switch (config.loading_rule) {
                    case LoadingRule::UnitLoadings:
                        s.kind = PenaltyKind::SqrtLassoIterative;
                        s.params.alpha = config.mc_alpha;
                        s.params.c = config.mc_c;
                        s.lambda = lambda_sqrt_lasso_simple(config.n, config.p,
                                                            config.mc_alpha, config.mc_c);
                        s.loadings = Vector::Ones(config.p);
                        break;
                    case LoadingRule::Algorithm1: {
                        const PenaltyParams params = recommended_params(config.n);
                        Algorithm1Result alg = run_algorithm1(
                            data, params,
                            [&](const Dataset& d, const PenaltyScheme& sch, const Vector* warm) {
                                SolverOptions opts = config.solver;
                                if (warm) opts.warm_start = *warm;
                                return fit(d, sch, opts);
                            });
                        s = alg.scheme;
                        break;
                    }
                    case LoadingRule::SymmetricScheme: {
                        const PenaltyParams params = recommended_params(config.n);
                        s = symmetric_scheme(data.x(), params.alpha, params.c, params.u_n);
                        break;
                    }
                }
                if (config.lambda_override > 0.0) s.lambda = config.lambda_override;
                return s;
            };

            auto ensure_sqrt = [&]() {
                if (!sqrt_ready) {
                    sqrt_scheme = make_sqrt_scheme();
                    sqrt_fit = fit(data, sqrt_scheme, config.solver);
                    sqrt_ready = true;
                }
            };
            auto ensure_ideal = [&]() {
                if (!ideal_ready) {
                    ideal_scheme = make_sqrt_scheme();
                    if (config.loading_rule != LoadingRule::SymmetricScheme)
                        ideal_scheme.loadings = ideal_loadings(data.x(), noise);
                    ideal_fit = fit(data, ideal_scheme, config.solver);
                    ideal_ready = true;
                }
            };
            auto ensure_lasso = [&]() {
                if (!lasso_ready) {
                    lasso_scheme.kind = PenaltyKind::LassoKnownSigma;
                    lasso_scheme.params.alpha = config.mc_alpha;
                    lasso_scheme.params.c = config.mc_c;
                    lasso_scheme.params.sigma = sigma;
                    lasso_scheme.lambda = lambda_lasso_known_sigma(
                        config.n, config.p, config.mc_alpha, config.mc_c, sigma);
                    lasso_scheme.loadings = Vector::Ones(config.p);
                    lasso_fit = fit(data, lasso_scheme, config.solver);
                    lasso_ready = true;
                }
            };

            for (std::size_t ei = 0; ei < n_est; ++ei) {
                detail::RepOutcome& cell = bundle.outcomes[si][ei];
                try {
                    Vector beta;
                    switch (config.estimators[ei]) {
                        case Estimator::LassoKnownSigma:
                            ensure_lasso();
                            beta = lasso_fit.beta;
                            break;
                        case Estimator::OlsPostLasso:
                            ensure_lasso();
                            beta = ols_post(data, lasso_fit.support).beta;
                            break;
                        case Estimator::SqrtLasso:
                            ensure_sqrt();
                            beta = sqrt_fit.beta;
                            break;
                        case Estimator::OlsPostSqrtLasso:
                            ensure_sqrt();
                            beta = ols_post(data, sqrt_fit.support).beta;
                            break;
                        case Estimator::IdealSqrtLasso:
                            ensure_ideal();
                            beta = ideal_fit.beta;
                            break;
                        case Estimator::OlsPostIdealSqrtLasso:
                            ensure_ideal();
                            beta = ols_post(data, ideal_fit.support).beta;
                            break;
                        case Estimator::OracleEstimator:
                            beta = ols_post(data, oracle.support_T).beta;
                            break;
                    }
                    cell.delta = beta - oracle.beta0;
                    cell.risk = prediction_norm(cell.delta, data);
                    cell.support = static_cast<double>(support_of(beta).size());
                    if (detail::is_sqrt_family(config.estimators[ei])) {
                        const PenaltyScheme& sch =
                            config.estimators[ei] == Estimator::SqrtLasso ? sqrt_scheme
                                                                          : ideal_scheme;
                        // a composite error at roundoff level is the noiseless
                        // regime; the domination event degenerates there
                        const double rms_u =
                            std::sqrt(composite.squaredNorm() / static_cast<double>(config.n));
                        const double rms_y =
                            std::sqrt(y.squaredNorm() / static_cast<double>(config.n));
                        if (rms_u > 1e-12 * (1.0 + rms_y)) {
                            const Vector score = score_vector(data, composite);
                            cell.event = event_check(sch.lambda, config.n, sch.params.c,
                                                     score, sch.loadings);
                        }
                    }
                } catch (const std::exception&) {
                    cell.failed = true;
                }
            }
        }
    };

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int n_threads =
        std::max(1, std::min(config.threads > 0 ? config.threads : std::max(hw, 1),
                             config.n_reps));
    if (n_threads == 1) {
        for (int rep = 0; rep < config.n_reps; ++rep) run_rep(rep);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&]() {
                for (int rep = next.fetch_add(1); rep < config.n_reps;
                     rep = next.fetch_add(1))
                    run_rep(rep);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Ordered reduction, independent of which thread ran which replication.
    McReport report;
    report.config = config;
    for (std::size_t si = 0; si < n_sigma; ++si) {
        for (std::size_t ei = 0; ei < n_est; ++ei) {
            McCell cell;
            cell.estimator = config.estimators[ei];
            cell.sigma = config.sigma_grid[si];
            Vector delta_sum = Vector::Zero(config.p);
            int event_true = 0;
            int event_count = 0;
            for (int rep = 0; rep < config.n_reps; ++rep) {
                const detail::RepOutcome& o =
                    bundles[static_cast<std::size_t>(rep)].outcomes[si][ei];
                if (o.failed) {
                    ++cell.n_failed;
                    continue;
                }
                ++cell.n_ok;
                cell.mean_risk += o.risk;
                cell.mean_support += o.support;
                cell.risks.push_back(o.risk);
                delta_sum += o.delta;
                if (o.event) {
                    ++event_count;
                    if (*o.event) ++event_true;
                }
            }
            if (cell.n_ok > 0) {
                cell.mean_risk /= cell.n_ok;
                cell.mean_support /= cell.n_ok;
                cell.bias_norm = (delta_sum / cell.n_ok).norm();
            }
            if (event_count > 0)
                cell.event_coverage = static_cast<double>(event_true) / event_count;
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

// ----------------------------------------------------------------------------
// Bundled desk-scale presets
// ----------------------------------------------------------------------------

inline McConfig make_preset(const std::string& name) {
    McConfig cfg;
    if (name == "fig1-desk" || name == "fig1-desk-t4") {
        cfg.n = 100;
        cfg.p = 500;
        cfg.rho_toeplitz = 0.5;
        cfg.beta_star_rule = BetaStarRule::InvJ32;
        cfg.error_law = name == "fig1-desk" ? ErrorLaw::Gaussian : ErrorLaw::T4Scaled;
        cfg.sigma_grid = {0.25, 0.5, 1.0, 2.0, 5.0};
        cfg.n_reps = 100;
        cfg.loading_rule = LoadingRule::UnitLoadings;
        cfg.mc_alpha = 0.05;
        cfg.mc_c = 1.1;
        cfg.estimators = {Estimator::LassoKnownSigma, Estimator::OlsPostLasso,
                          Estimator::SqrtLasso, Estimator::OlsPostSqrtLasso};
    } else if (name == "fig4-desk") {
        cfg.n = 200;
        cfg.p = 200;
        cfg.rho_toeplitz = 0.5;
        cfg.beta_star_rule = BetaStarRule::InvJ2;
        cfg.error_law = ErrorLaw::HeteroskedasticGaussian;
        cfg.sigma_grid = {0.1, 0.4, 0.7, 1.0};
        cfg.n_reps = 100;
        cfg.loading_rule = LoadingRule::Algorithm1;
        cfg.estimators = {Estimator::OracleEstimator, Estimator::SqrtLasso,
                          Estimator::OlsPostSqrtLasso, Estimator::IdealSqrtLasso,
                          Estimator::OlsPostIdealSqrtLasso};
    } else if (name == "t2-desk") {
        cfg.n = 200;
        cfg.p = 100;
        cfg.rho_toeplitz = 0.5;
        cfg.beta_star_rule = BetaStarRule::InvJ32;
        cfg.error_law = ErrorLaw::T2;
        cfg.sigma_grid = {1.0};
        cfg.n_reps = 100;
        cfg.loading_rule = LoadingRule::SymmetricScheme;
        cfg.estimators = {Estimator::SqrtLasso, Estimator::OlsPostSqrtLasso};
    } else if (name == "noiseless-1rep") {
        cfg.n = 50;
        cfg.p = 20;
        cfg.rho_toeplitz = 0.0;
        cfg.beta_star_rule = BetaStarRule::Custom;
        cfg.custom_beta_star = Vector::Zero(20);
        cfg.custom_beta_star[0] = 1.0;
        cfg.custom_beta_star[1] = -1.0;
        cfg.custom_beta_star[2] = 0.5;
        cfg.error_law = ErrorLaw::Gaussian;
        cfg.sigma_grid = {0.0};
        cfg.n_reps = 1;
        cfg.loading_rule = LoadingRule::UnitLoadings;
        cfg.lambda_override = 5.0;
        cfg.estimators = {Estimator::SqrtLasso};
    } else {
        throw InvalidParameter("unknown preset: " + name);
    }
    return cfg;
}

}  // namespace sqrtlasso
