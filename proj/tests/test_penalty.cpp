#include <catch2/catch_amalgamated.hpp>

#include "sqrtlasso/penalty.hpp"
#include "sqrtlasso/solvers.hpp"
#include "sqrtlasso/simulate.hpp"
#include "test_oracles.hpp"

using namespace sqrtlasso;

TEST_CASE("normal_quantile at the median and standard points") {
    CHECK(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    // pinned once from the bisection oracle
    CHECK(normal_quantile(0.975) == Catch::Approx(1.9599639845400545).margin(1e-9));
    CHECK(normal_quantile(0.975) ==
          Catch::Approx(oracles::normal_quantile_bisect(0.975)).margin(1e-12));
}

TEST_CASE("normal_quantile is antisymmetric") {
    for (double q : {0.0001, 0.01, 0.2, 0.31, 0.499}) {
        CHECK(normal_quantile(1.0 - q) == Catch::Approx(-normal_quantile(q)).margin(1e-12));
    }
}

TEST_CASE("normal_quantile stays within the accuracy contract") {
    for (double q = 0.0005; q < 1.0; q += 0.0101) {
        CHECK(normal_quantile(q) ==
              Catch::Approx(oracles::normal_quantile_bisect(q)).margin(1e-9));
    }
    CHECK_THROWS_AS(normal_quantile(0.0), InvalidParameter);
    CHECK_THROWS_AS(normal_quantile(1.0), InvalidParameter);
    CHECK_THROWS_AS(normal_quantile(-0.2), InvalidParameter);
}

TEST_CASE("lambda_sqrt_lasso follows the displayed formula") {
    // degenerate case: alpha = 1, p = 1 gives the 0.5 quantile, which is 0
    const double u = 0.07, c = 1.3;
    CHECK(lambda_sqrt_lasso(100, 1, 1.0, c, u) ==
          Catch::Approx((1.0 + u) * c * 10.0 * (1.0 + u)).epsilon(1e-13));

    // independent one-line evaluation at the recommended defaults
    const Eigen::Index n = 100, p = 500;
    const double alpha = 0.05 / std::log(100.0);
    const double u_n = 0.1 / std::log(100.0);
    const double expected =
        (1.0 + u_n) * 1.01 * std::sqrt(100.0) *
        (oracles::normal_quantile_bisect(1.0 - alpha / 1000.0) + 1.0 + u_n);
    CHECK(lambda_sqrt_lasso(n, p, alpha, 1.01, u_n) ==
          Catch::Approx(expected).epsilon(1e-10));
}

TEST_CASE("lambda_sqrt_lasso validates its parameters") {
    CHECK_THROWS_AS(lambda_sqrt_lasso(0, 5, 0.05, 1.01, 0.0), InvalidParameter);
    CHECK_THROWS_AS(lambda_sqrt_lasso(10, 5, 0.05, 1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(lambda_sqrt_lasso(10, 5, 0.0, 1.01, 0.0), InvalidParameter);
    CHECK_THROWS_AS(lambda_sqrt_lasso(10, 5, 0.05, 1.01, -0.1), InvalidParameter);
}

TEST_CASE("lambda level is monotone in p and alpha") {
    const double base = lambda_sqrt_lasso(200, 50, 0.05, 1.01, 0.02);
    CHECK(lambda_sqrt_lasso(200, 200, 0.05, 1.01, 0.02) > base);
    CHECK(lambda_sqrt_lasso(200, 50, 0.01, 1.01, 0.02) > base);
    CHECK(lambda_sqrt_lasso(200, 50, 0.20, 1.01, 0.02) < base);
}

TEST_CASE("lambda_lasso_known_sigma follows the displayed formula") {
    CHECK(lambda_lasso_known_sigma(100, 500, 0.05, 1.1, 0.0) == 0.0);
    const double expected =
        2.0 * 1.1 * 1.0 * 10.0 * oracles::normal_quantile_bisect(1.0 - 0.05 / 1000.0);
    CHECK(lambda_lasso_known_sigma(100, 500, 0.05, 1.1, 1.0) ==
          Catch::Approx(expected).epsilon(1e-10));
    // c = 1 is allowed here, unlike the sqrt scheme
    CHECK_NOTHROW(lambda_lasso_known_sigma(100, 500, 0.05, 1.0, 1.0));
    CHECK_THROWS_AS(lambda_lasso_known_sigma(100, 500, 0.05, 0.9, 1.0), InvalidParameter);
    CHECK_THROWS_AS(lambda_lasso_known_sigma(100, 500, 0.05, 1.1, -1.0), InvalidParameter);
}

TEST_CASE("initial loadings use the fourth-moment rule") {
    Matrix pm1(4, 1);
    pm1 << 1, -1, 1, -1;
    CHECK(initial_loadings(pm1, 2.0)[0] == Catch::Approx(2.0).epsilon(1e-14));

    Matrix col(2, 1);
    col << 0.0, std::sqrt(2.0);
    CHECK(initial_loadings(col, 1.0)[0] ==
          Catch::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
    CHECK_THROWS_AS(initial_loadings(col, 0.0), InvalidParameter);
}

TEST_CASE("recommended parameters match the stated defaults") {
    const PenaltyParams params = recommended_params(100);
    CHECK(params.alpha == Catch::Approx(0.05 / std::log(100.0)));
    CHECK(params.u_n == Catch::Approx(0.1 / std::log(100.0)));
    CHECK(params.c == 1.01);
    CHECK(params.w == 2.0);
}

TEST_CASE("refine_loadings ratio arithmetic") {
    Matrix cols(2, 2);
    cols << 1, 0, 1, std::sqrt(2.0);
    Vector e(2);
    e << 2, 0;
    const Vector g = refine_loadings(cols, e);
    CHECK(g[0] == Catch::Approx(1.0).epsilon(1e-14));  // ratio exactly 1
    CHECK(g[1] == Catch::Approx(1.0).epsilon(1e-14));  // numerator 0, floor binds
}

TEST_CASE("refine_loadings is one in the homoskedastic limit") {
    Matrix pm1(4, 1);
    pm1 << 1, -1, -1, 1;
    Vector e(4);
    e << 1, -1, 1, -1;  // constant magnitude
    CHECK(refine_loadings(pm1, e)[0] == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("refine_loadings rejects zero residuals") {
    Matrix x = Matrix::Ones(3, 1);
    CHECK_THROWS_AS(refine_loadings(x, Vector::Zero(3)), ZeroResiduals);
}

TEST_CASE("refine_loadings is invariant to positive rescaling of residuals") {
    Matrix x = oracles::random_normalized_design(15, 4, 9);
    Vector e = oracles::random_gaussian_vector(15, 10);
    const Vector base = refine_loadings(x, e);
    for (double c : {0.25, 3.0, 1e4}) {
        CHECK((refine_loadings(x, Vector(c * e)) - base).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("symmetric scheme takes per-column max moduli") {
    Matrix x(2, 2);
    x << 1, 0, -1, std::sqrt(2.0);
    const PenaltyScheme scheme = symmetric_scheme(x, 0.05, 1.01, 0.02);
    CHECK(scheme.loadings[0] == Catch::Approx(1.0));
    CHECK(scheme.loadings[1] == Catch::Approx(std::sqrt(2.0)));
    CHECK(scheme.kind == PenaltyKind::SymmetricHeavyTail);

    const double expected = (1.0 + 0.02) * 1.01 * std::sqrt(2.0) *
                            (1.0 + std::sqrt(2.0 * std::log(2.0 * 2.0 / 0.05)));
    CHECK(scheme.lambda == Catch::Approx(expected).epsilon(1e-13));

    // doubling alpha strictly lowers the level
    CHECK(symmetric_scheme(x, 0.10, 1.01, 0.02).lambda < scheme.lambda);
}

namespace {

SqrtLassoSolver default_solver() {
    return [](const Dataset& d, const PenaltyScheme& s, const Vector* warm) {
        SolverOptions opts;
        if (warm) opts.warm_start = *warm;
        return fit(d, s, opts);
    };
}

Dataset make_gaussian_dataset(Eigen::Index n, Eigen::Index p, double sigma,
                              std::uint64_t seed) {
    Matrix raw = gen_design(n, p, 0.5, seed);
    Vector beta_star = Vector::Zero(p);
    beta_star[0] = 1.0;
    beta_star[1] = -0.7;
    beta_star[3] = 0.4;
    GeneratedErrors err =
        gen_errors(n, ErrorLaw::Gaussian, sigma, raw, beta_star, seed + 1);
    Vector y = raw * beta_star + err.sigma_i.cwiseProduct(err.eps);
    return Dataset(std::move(y), raw);
}

}  // namespace

TEST_CASE("algorithm 1 stops after one refinement under an infinite tolerance") {
    const Dataset data = make_gaussian_dataset(200, 30, 1.0, 3);
    PenaltyParams params = recommended_params(200);
    params.tolerance = std::numeric_limits<double>::infinity();
    const Algorithm1Result res = run_algorithm1(data, params, default_solver());
    CHECK(res.trace.stop_reason == StopReason::ToleranceMet);
    CHECK(res.trace.loadings.size() == 2);  // gamma_0 plus the accepted refinement
    CHECK(res.trace.max_changes.size() == 1);
}

TEST_CASE("algorithm 1 with K = 0 keeps the initial loadings") {
    const Dataset data = make_gaussian_dataset(200, 30, 1.0, 4);
    PenaltyParams params = recommended_params(200);
    params.max_iter = 0;
    params.tolerance = 1e-12;
    const Algorithm1Result res = run_algorithm1(data, params, default_solver());
    CHECK(res.trace.stop_reason == StopReason::MaxIterations);
    REQUIRE(res.trace.loadings.size() == 1);
    CHECK((res.scheme.loadings - initial_loadings(data.x(), params.w))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(res.trace.max_changes.size() == 1);  // one attempt was made
}

TEST_CASE("algorithm 1 loadings concentrate near one under homoskedastic noise") {
    // Monte Carlo check: across seeds, refined loadings land in [1, 1.5]
    // with at least 95% of them at or below 1.25.
    int total = 0, small = 0;
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const Dataset data = make_gaussian_dataset(200, 50, 1.0, seed);
        const Algorithm1Result res =
            run_algorithm1(data, recommended_params(200), default_solver());
        for (Eigen::Index j = 0; j < 50; ++j) {
            const double g = res.scheme.loadings[j];
            CHECK(g >= 1.0);
            CHECK(g <= 1.5);
            ++total;
            if (g <= 1.25) ++small;
        }
    }
    CHECK(static_cast<double>(small) / total >= 0.95);
}

TEST_CASE("algorithm 1 trace invariants") {
    const Dataset data = make_gaussian_dataset(250, 40, 0.8, 21);
    PenaltyParams params = recommended_params(250);
    params.max_iter = 3;
    params.tolerance = 1e-9;  // force the iteration cap
    const Algorithm1Result res = run_algorithm1(data, params, default_solver());
    CHECK(res.trace.loadings.size() <= static_cast<std::size_t>(params.max_iter) + 1);
    for (std::size_t k = 1; k < res.trace.loadings.size(); ++k)
        CHECK(res.trace.loadings[k].minCoeff() >= 1.0);
    if (res.trace.stop_reason == StopReason::ToleranceMet) {
        REQUIRE(res.trace.loadings.size() >= 2);
        const auto last = res.trace.loadings.size() - 1;
        CHECK((res.trace.loadings[last] - res.trace.loadings[last - 1])
                  .cwiseAbs()
                  .maxCoeff() <= params.tolerance);
    }
    CHECK_THROWS_AS(run_algorithm1(data, [] {
                        PenaltyParams bad = recommended_params(250);
                        bad.w = 0.5;
                        return bad;
                    }(), default_solver()),
                    InvalidParameter);
}

TEST_CASE("algorithm 1 halts in the noiseless regime") {
    Matrix raw = gen_design(300, 10, 0.0, 33);
    Vector beta_star = Vector::Zero(10);
    beta_star[0] = 2.0;
    Vector y = raw * beta_star;
    const Dataset data(std::move(y), raw);
    PenaltyParams params = recommended_params(300);
    const Algorithm1Result res = run_algorithm1(data, params, default_solver());
    CHECK(res.trace.stop_reason == StopReason::ToleranceMet);
    // exact recovery happens at the first fit, so the initial loadings stay
    CHECK(res.trace.loadings.size() >= 1);
    CHECK(res.last_fit.q_hat <= 1e-20);
}
