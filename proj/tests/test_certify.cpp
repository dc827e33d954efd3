#include <catch2/catch_amalgamated.hpp>

#include "sqrtlasso/certify.hpp"
#include "sqrtlasso/penalty.hpp"
#include "sqrtlasso/simulate.hpp"
#include "sqrtlasso/solvers.hpp"
#include "test_oracles.hpp"

using namespace sqrtlasso;

namespace {

PenaltyScheme sqrt_scheme(Eigen::Index p, double lambda) {
    PenaltyScheme s;
    s.kind = PenaltyKind::SqrtLassoIterative;
    s.lambda = lambda;
    s.loadings = Vector::Ones(p);
    return s;
}

Dataset noisy_instance(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    Matrix raw = gen_design(n, p, 0.5, seed);
    Vector beta_star = Vector::Zero(p);
    beta_star[0] = 1.0;
    beta_star[1] = -0.5;
    GeneratedErrors err = gen_errors(n, ErrorLaw::Gaussian, 1.0, raw, beta_star, seed + 3);
    Vector y = raw * beta_star + err.sigma_i.cwiseProduct(err.eps);
    return Dataset(std::move(y), raw);
}

}  // namespace

TEST_CASE("dual vector of constant residuals is the all-ones direction") {
    Matrix x = oracles::random_normalized_design(6, 2, 1);
    Vector y = x * Vector::Zero(2) + Vector::Constant(6, 3.0);
    Dataset data = Dataset::from_normalized(y, x, Vector::Ones(2));
    FitResult f;
    f.beta = Vector::Zero(2);
    const Vector a = dual_vector(f, data);
    CHECK((a - Vector::Ones(6)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dual vector has norm sqrt(n) and satisfies the strong-duality identity") {
    const Dataset data = noisy_instance(50, 15, 5);
    const PenaltyScheme s = sqrt_scheme(15, lambda_sqrt_lasso_simple(50, 15, 0.05, 1.1));
    const FitResult f = fit(data, s);
    const Vector a = dual_vector(f, data);
    CHECK(a.norm() == Catch::Approx(std::sqrt(50.0)).margin(1e-10));

    // E_n[(y - x'beta) a] equals sqrt(qhat), recomputing both sides
    const Vector r = data.y() - data.x() * f.beta;
    const double lhs = r.dot(a) / 50.0;
    CHECK(lhs == Catch::Approx(std::sqrt(q_hat(f.beta, data))).margin(1e-10));
}

TEST_CASE("dual vector is unavailable for interpolating fits") {
    Matrix x = oracles::orthonormalized_design(20, 4, 7);
    Vector beta0 = Vector::Zero(4);
    beta0[2] = 1.0;
    Dataset data = Dataset::from_normalized(x * beta0, x, Vector::Ones(4));
    FitResult f;
    f.beta = beta0;
    CHECK_THROWS_AS(dual_vector(f, data), ZeroResidualFit);
}

TEST_CASE("a tightly converged fit earns a clean certificate") {
    const Dataset data = noisy_instance(60, 30, 11);
    const PenaltyScheme s = sqrt_scheme(30, lambda_sqrt_lasso_simple(60, 30, 0.05, 1.1));
    SolverOptions opts;
    opts.tol = 1e-10;
    const FitResult f = fit(data, s, opts);
    REQUIRE(f.converged);
    const Certificate cert = check_kkt(f, data, s, 1e-6);
    CHECK(cert.max_constraint_violation <= 1e-6);
    CHECK(cert.gap <= 1e-8 * (1.0 + std::abs(f.objective)));
    CHECK(cert.gap >= -1e-10);
    CHECK(cert.feasible_after_scaling);
    CHECK(cert.passes(1e-6));
}

TEST_CASE("perturbing an active coordinate breaks the certificate") {
    const Dataset data = noisy_instance(60, 20, 13);
    const PenaltyScheme s = sqrt_scheme(20, lambda_sqrt_lasso_simple(60, 20, 0.05, 1.1));
    FitResult f = fit(data, s);
    REQUIRE_FALSE(f.support.empty());
    f.beta[f.support.front()] += 0.1;
    f.support = support_of(f.beta);
    const Certificate cert = check_kkt(f, data, s, 1e-6);
    CHECK_FALSE(cert.passes(1e-6));
    CHECK(std::max(cert.max_constraint_violation, cert.active_sign_gap) > 1e-6);
}

TEST_CASE("weak duality holds for every rescaled dual candidate") {
    for (std::uint64_t seed : {17u, 18u, 19u}) {
        const Dataset data = noisy_instance(40, 12, seed);
        const PenaltyScheme s =
            sqrt_scheme(12, lambda_sqrt_lasso_simple(40, 12, 0.05, 1.1));
        // arbitrary directions, made feasible by the uniform rescale
        for (std::uint64_t k = 0; k < 5; ++k) {
            Vector a = oracles::random_gaussian_vector(40, 100 * seed + k);
            a *= std::sqrt(40.0) / a.norm();
            const double scale = feasibility_scale(a, data, s);
            const double dual = scale * dual_value(a, data);
            for (std::uint64_t b = 0; b < 4; ++b) {
                Vector beta = 0.3 * oracles::random_gaussian_vector(12, 777 * seed + b);
                CHECK(dual <= objective_value(beta, data, s) + 1e-10);
            }
        }
    }
}

TEST_CASE("certification is invariant to positive response scaling") {
    const Dataset data = noisy_instance(50, 16, 23);
    const PenaltyScheme s = sqrt_scheme(16, lambda_sqrt_lasso_simple(50, 16, 0.05, 1.1));
    const FitResult f = fit(data, s);
    REQUIRE(check_kkt(f, data, s, 1e-6).passes(1e-6));
    for (double c : {0.01, 4.0, 250.0}) {
        Dataset scaled =
            Dataset::from_normalized(Vector(c * data.y()), data.x(), data.col_scales());
        FitResult g = fit(scaled, s);
        CHECK(check_kkt(g, scaled, s, 1e-6).passes(1e-6));
    }
}

TEST_CASE("noiseless fits fall back to primal-only certification") {
    Matrix x = oracles::orthonormalized_design(40, 8, 29);
    Vector beta0 = Vector::Zero(8);
    beta0[0] = 1.0;
    beta0[5] = -2.0;
    Dataset data = Dataset::from_normalized(x * beta0, x, Vector::Ones(8));
    const PenaltyScheme s = sqrt_scheme(8, 12.0);
    const FitResult f = fit(data, s);
    REQUIRE((f.beta - beta0).cwiseAbs().maxCoeff() <= 1e-8);
    const Certificate cert = check_kkt(f, data, s, 1e-6);
    CHECK(cert.primal_only);
    CHECK(cert.gap == 0.0);
    CHECK(cert.passes(1e-6));
}
