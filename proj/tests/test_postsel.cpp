#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Cholesky>

#include "sqrtlasso/penalty.hpp"
#include "sqrtlasso/postsel.hpp"
#include "sqrtlasso/simulate.hpp"
#include "sqrtlasso/solvers.hpp"
#include "test_oracles.hpp"

using namespace sqrtlasso;

TEST_CASE("empty support refits to zero") {
    Matrix x = oracles::random_normalized_design(12, 4, 1);
    Vector y = oracles::random_gaussian_vector(12, 2);
    Dataset data = Dataset::from_normalized(y, x, Vector::Ones(4));
    const FitResult f = ols_post(data, {});
    CHECK(f.beta.cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.q_hat == Catch::Approx(y.squaredNorm() / 12.0).epsilon(1e-14));
    CHECK(f.support.empty());
}

TEST_CASE("full-support refit matches the normal equations") {
    const Eigen::Index n = 30, p = 5;
    Matrix x = oracles::random_normalized_design(n, p, 3);
    Vector y = oracles::random_gaussian_vector(n, 4);
    Dataset data = Dataset::from_normalized(y, x, Vector::Ones(p));
    std::vector<Eigen::Index> all{0, 1, 2, 3, 4};
    const FitResult f = ols_post(data, all);

    // independent route: solve (X'X) beta = X'y by Cholesky
    const Matrix gram = x.transpose() * x;
    const Vector beta_ne = Eigen::LLT<Matrix>(gram).solve(x.transpose() * y);
    CHECK((f.beta - beta_ne).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("duplicated columns get the minimum-norm tie-break") {
    const Eigen::Index n = 25;
    Matrix x(n, 3);
    Matrix base = oracles::random_normalized_design(n, 2, 7);
    x.col(0) = base.col(0);
    x.col(1) = base.col(1);
    x.col(2) = base.col(0);  // exact copy of column 0
    Vector y = oracles::random_gaussian_vector(n, 8);
    Dataset data = Dataset::from_normalized(y, x, Vector::Ones(3));

    const FitResult dup = ols_post(data, {0, 2});
    Dataset single = Dataset::from_normalized(y, base, Vector::Ones(2));
    const FitResult one = ols_post(single, {0});

    const Vector fitted_dup = data.x() * dup.beta;
    const Vector fitted_one = single.x() * one.beta;
    CHECK((fitted_dup - fitted_one).cwiseAbs().maxCoeff() <= 1e-8);
    // minimum-norm splits the weight evenly across the two copies
    CHECK(dup.beta[0] == Catch::Approx(dup.beta[2]).margin(1e-10));
}

TEST_CASE("refitting the selected support never raises the in-sample error") {
    Matrix raw = gen_design(60, 25, 0.5, 11);
    Vector beta_star = Vector::Zero(25);
    beta_star[0] = 1.0;
    beta_star[4] = -0.8;
    GeneratedErrors err = gen_errors(60, ErrorLaw::Gaussian, 1.0, raw, beta_star, 12);
    Dataset data(raw * beta_star + err.sigma_i.cwiseProduct(err.eps), raw);

    PenaltyScheme scheme;
    scheme.kind = PenaltyKind::SqrtLassoIterative;
    scheme.lambda = lambda_sqrt_lasso_simple(60, 25, 0.05, 1.1);
    scheme.loadings = Vector::Ones(25);
    const FitResult shrunk = fit(data, scheme);
    const FitResult refit = ols_post(data, shrunk.support);
    CHECK(refit.q_hat <= shrunk.q_hat + 1e-12);
}

TEST_CASE("refit residuals are orthogonal to every selected column") {
    Matrix x = oracles::random_normalized_design(40, 10, 13);
    Vector y = oracles::random_gaussian_vector(40, 14);
    Dataset data = Dataset::from_normalized(y, x, Vector::Ones(10));
    std::vector<Eigen::Index> support{1, 3, 8};
    const FitResult f = ols_post(data, support);
    const Vector r = y - x * f.beta;
    for (Eigen::Index j : support)
        CHECK(std::abs(x.col(j).dot(r)) / 40.0 <= 1e-8);
    // off-support coordinates are exactly zero
    for (Eigen::Index j : {0, 2, 4, 5, 6, 7, 9})
        CHECK(f.beta[j] == 0.0);
}

TEST_CASE("out-of-range support indices are rejected") {
    Matrix x = oracles::random_normalized_design(10, 3, 15);
    Dataset data = Dataset::from_normalized(Vector::Zero(10), x, Vector::Ones(3));
    CHECK_THROWS_AS(ols_post(data, {3}), InvalidParameter);
    CHECK_THROWS_AS(ols_post(data, {-1}), InvalidParameter);
}
