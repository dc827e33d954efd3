#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "sqrtlasso/core.hpp"
#include "sqrtlasso/csv.hpp"
#include "test_oracles.hpp"

using namespace sqrtlasso;

TEST_CASE("normalize_design leaves unit columns unchanged") {
    Matrix x = Matrix::Ones(6, 1);
    auto nd = normalize_design(x);
    CHECK(nd.col_scales[0] == Catch::Approx(1.0));
    CHECK((nd.x - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("normalize_design rescales a constant column") {
    Matrix x(2, 1);
    x << 2, 2;
    auto nd = normalize_design(x);
    CHECK(nd.col_scales[0] == Catch::Approx(2.0));
    CHECK(nd.x(0, 0) == Catch::Approx(1.0));
    CHECK(nd.x(1, 0) == Catch::Approx(1.0));
}

TEST_CASE("normalize_design divides by the root second moment") {
    Matrix x(2, 1);
    x << 3, 4;
    auto nd = normalize_design(x);
    const double scale = std::sqrt((9.0 + 16.0) / 2.0);  // sqrt(12.5)
    CHECK(nd.col_scales[0] == Catch::Approx(scale).epsilon(1e-14));
    CHECK(nd.x(0, 0) == Catch::Approx(3.0 / scale).epsilon(1e-14));
    CHECK(nd.x(1, 0) == Catch::Approx(4.0 / scale).epsilon(1e-14));
}

TEST_CASE("normalize_design rejects all-zero columns") {
    Matrix x = Matrix::Zero(3, 2);
    x.col(0).setOnes();
    CHECK_THROWS_AS(normalize_design(x), IdenticallyZeroColumn);
}

TEST_CASE("normalization is idempotent") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Matrix raw = oracles::random_normalized_design(24, 4, seed + 10);
        raw.col(0) *= 11.5;
        raw.col(2) *= 0.03;
        auto once = normalize_design(raw);
        auto twice = normalize_design(once.x);
        CHECK((twice.x - once.x).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((twice.col_scales - Vector::Ones(4)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("dataset columns have unit second moments") {
    Matrix raw(5, 3);
    raw << 1, 2, 3,
           -4, 5, 6,
           7, -8, 9,
           0.5, 0.25, -1,
           2, 2, 2;
    Vector y = Vector::LinSpaced(5, -1, 1);
    Dataset data(y, raw);
    for (Eigen::Index j = 0; j < 3; ++j) {
        const double m2 = data.x().col(j).squaredNorm() / 5.0;
        CHECK(std::abs(m2 - 1.0) <= 1e-10);
    }
    CHECK_THROWS_AS(Dataset(Vector::Zero(4), raw), DimensionMismatch);
}

TEST_CASE("prediction_norm of zero is zero") {
    Matrix x = oracles::random_normalized_design(10, 4, 5);
    CHECK(prediction_norm(Vector::Zero(4), x) == 0.0);
}

TEST_CASE("prediction_norm of a unit coordinate is one on an orthonormalized design") {
    Matrix x = oracles::orthonormalized_design(8, 8, 11);
    Vector e1 = Vector::Zero(8);
    e1[0] = 1.0;
    CHECK(prediction_norm(e1, x) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prediction_norm matches a brute-force loop") {
    Matrix x = oracles::random_normalized_design(5, 3, 77);
    Vector delta(3);
    delta << 1, -1, 0;
    CHECK(prediction_norm(delta, x) ==
          Catch::Approx(oracles::prediction_norm_loop(delta, x)).epsilon(1e-13));
    CHECK_THROWS_AS(prediction_norm(Vector::Zero(4), x), DimensionMismatch);
}

TEST_CASE("prediction_norm is absolutely homogeneous") {
    Matrix x = oracles::random_normalized_design(12, 5, 13);
    Vector delta = oracles::random_gaussian_vector(5, 14);
    const double base = prediction_norm(delta, x);
    for (double c : {-3.0, 0.5, 7.25}) {
        CHECK(prediction_norm(Vector(c * delta), x) ==
              Catch::Approx(std::abs(c) * base).epsilon(1e-12));
    }
}

TEST_CASE("q_hat vanishes on exact fits and equals mean y^2 at zero") {
    Matrix raw = oracles::random_normalized_design(9, 3, 21);
    Vector beta(3);
    beta << 0.5, -2, 1;
    Vector y = raw * beta;
    Dataset data(y, raw);
    // the constructor renormalizes, so express beta on the stored design scale
    Vector beta_norm = beta.cwiseProduct(data.col_scales());
    CHECK(q_hat(beta_norm, data) <= 1e-24);
    CHECK(q_hat(Vector::Zero(3), data) ==
          Catch::Approx(y.squaredNorm() / 9.0).epsilon(1e-14));
    CHECK_THROWS_AS(q_hat(Vector::Zero(2), data), DimensionMismatch);
}

TEST_CASE("q_hat matches a brute-force residual loop") {
    Matrix raw = oracles::random_normalized_design(7, 4, 31);
    Vector y = oracles::random_gaussian_vector(7, 32);
    Dataset data(y, raw);
    Vector beta = oracles::random_gaussian_vector(4, 33);
    CHECK(q_hat(beta, data) ==
          Catch::Approx(oracles::q_hat_loop(beta, data.y(), data.x())).margin(1e-12));
    CHECK(q_hat(beta, data) >= 0.0);
}

TEST_CASE("support_of lists exactly the nonzero coordinates") {
    Vector beta(5);
    beta << 0.0, 1e-300, 0.0, -2.0, 0.0;
    const auto s = support_of(beta);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == 1);
    CHECK(s[1] == 3);
}

TEST_CASE("penalty scheme validation enforces the unit loading floor") {
    PenaltyScheme scheme;
    scheme.lambda = 1.0;
    scheme.loadings = Vector::Ones(3);
    scheme.validate(3);
    scheme.loadings[1] = 0.5;
    CHECK_THROWS_AS(scheme.validate(3), InvalidParameter);
    scheme.loadings = Vector::Ones(3);
    scheme.lambda = -1.0;
    CHECK_THROWS_AS(scheme.validate(3), InvalidParameter);
}

namespace {

std::string write_temp_csv(const std::string& content) {
    static int counter = 0;
    const std::string path = "core_test_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("csv ingestion splits response and features") {
    const std::string path = write_temp_csv("y,a,b\n1,2,3\n4,5,6\n-1,0.5,2\n");
    const CsvDataset csv = dataset_from_csv(read_csv(path), "y");
    CHECK(csv.data.n() == 3);
    CHECK(csv.data.p() == 2);
    CHECK(csv.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(csv.data.y()[1] == 4.0);
    std::remove(path.c_str());
}

TEST_CASE("csv ingestion rejects missing and non-numeric values") {
    const std::string missing = write_temp_csv("y,a\n1,\n2,3\n");
    CHECK_THROWS_AS(read_csv(missing), CsvError);
    std::remove(missing.c_str());

    const std::string bad = write_temp_csv("y,a\n1,x\n");
    CHECK_THROWS_AS(read_csv(bad), CsvError);
    std::remove(bad.c_str());

    const std::string ok = write_temp_csv("y,a\n1,2\n");
    CHECK_THROWS_AS(dataset_from_csv(read_csv(ok), "z"), CsvError);
    std::remove(ok.c_str());
}
