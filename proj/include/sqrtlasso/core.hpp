#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqrtlasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ----------------------------------------------------------------------------
// Errors
// ----------------------------------------------------------------------------

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IdenticallyZeroColumn : std::invalid_argument {
    explicit IdenticallyZeroColumn(Eigen::Index j)
        : std::invalid_argument("design column " + std::to_string(j) +
                                " is identically zero"),
          column(j) {}
    Eigen::Index column;
};

struct ZeroResiduals : std::runtime_error {
    ZeroResiduals()
        : std::runtime_error(
              "residuals are identically zero; loading ratio is undefined") {}
};

struct PenaltyTooLarge : std::runtime_error {
    explicit PenaltyTooLarge(Eigen::Index j)
        : std::runtime_error("penalty level times loading exceeds n*sqrt(E[x^2]) "
                             "for column " +
                             std::to_string(j)),
          column(j) {}
    Eigen::Index column;
};

struct ZeroResidualFit : std::runtime_error {
    ZeroResidualFit()
        : std::runtime_error("fit interpolates the data; dual vector undefined") {}
};

struct ZeroCompositeError : std::runtime_error {
    ZeroCompositeError()
        : std::runtime_error("composite error vector is identically zero") {}
};

struct EnumerationTooLarge : std::runtime_error {
    EnumerationTooLarge(double count, double limit)
        : std::runtime_error("support enumeration needs about " +
                             std::to_string(count) + " subsets, over the limit " +
                             std::to_string(limit)),
          count(count),
          limit(limit) {}
    double count;
    double limit;
};

struct EmptySupport : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ----------------------------------------------------------------------------
// Column normalization
// ----------------------------------------------------------------------------

struct NormalizedDesign {
    Matrix x;           // columns rescaled to unit empirical second moment
    Vector col_scales;  // positive divisors applied per column
};

// Rescales every column of raw_x so that mean(x_ij^2) over i equals 1.
// Throws IdenticallyZeroColumn for all-zero columns.
inline NormalizedDesign normalize_design(const Matrix& raw_x) {
    const Eigen::Index n = raw_x.rows();
    const Eigen::Index p = raw_x.cols();
    if (n < 1 || p < 1) throw InvalidParameter("design must have n >= 1, p >= 1");
    NormalizedDesign out;
    out.x = raw_x;
    out.col_scales = Vector(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double second_moment = raw_x.col(j).squaredNorm() / static_cast<double>(n);
        if (second_moment <= 0.0) throw IdenticallyZeroColumn(j);
        const double scale = std::sqrt(second_moment);
        out.col_scales[j] = scale;
        out.x.col(j) /= scale;
    }
    return out;
}

// ----------------------------------------------------------------------------
// Dataset
// ----------------------------------------------------------------------------

// Response plus column-normalized design. Immutable after construction.
class Dataset {
  public:
    Dataset(Vector y, const Matrix& raw_x) {
        if (y.size() != raw_x.rows())
            throw DimensionMismatch("y has " + std::to_string(y.size()) +
                                    " entries but design has " +
                                    std::to_string(raw_x.rows()) + " rows");
        NormalizedDesign nd = normalize_design(raw_x);
        y_ = std::move(y);
        x_ = std::move(nd.x);
        col_scales_ = std::move(nd.col_scales);
    }

    // For callers that already hold a unit-second-moment design.
    static Dataset from_normalized(Vector y, Matrix x, Vector col_scales) {
        Dataset d;
        if (y.size() != x.rows()) throw DimensionMismatch("y/design row mismatch");
        if (col_scales.size() != x.cols())
            throw DimensionMismatch("col_scales/design column mismatch");
        d.y_ = std::move(y);
        d.x_ = std::move(x);
        d.col_scales_ = std::move(col_scales);
        return d;
    }

    const Vector& y() const { return y_; }
    const Matrix& x() const { return x_; }
    const Vector& col_scales() const { return col_scales_; }
    Eigen::Index n() const { return x_.rows(); }
    Eigen::Index p() const { return x_.cols(); }

  private:
    Dataset() = default;
    Vector y_;
    Matrix x_;
    Vector col_scales_;
};

// ----------------------------------------------------------------------------
// Empirical moments in the 1/n convention
// ----------------------------------------------------------------------------

// Root mean square of x_i'delta over the sample.
inline double prediction_norm(const Vector& delta, const Matrix& x) {
    if (delta.size() != x.cols())
        throw DimensionMismatch("delta has " + std::to_string(delta.size()) +
                                " entries, design has " + std::to_string(x.cols()) +
                                " columns");
    return std::sqrt((x * delta).squaredNorm() / static_cast<double>(x.rows()));
}

inline double prediction_norm(const Vector& delta, const Dataset& data) {
    return prediction_norm(delta, data.x());
}

// Mean of squared residuals of beta.
inline double q_hat(const Vector& beta, const Dataset& data) {
    if (beta.size() != data.p())
        throw DimensionMismatch("beta has " + std::to_string(beta.size()) +
                                " entries, design has " + std::to_string(data.p()) +
                                " columns");
    return (data.y() - data.x() * beta).squaredNorm() / static_cast<double>(data.n());
}

// ----------------------------------------------------------------------------
// Penalty scheme
// ----------------------------------------------------------------------------

enum class PenaltyKind { SqrtLassoIterative, LassoKnownSigma, SymmetricHeavyTail, Custom };

inline const char* to_string(PenaltyKind k) {
    switch (k) {
        case PenaltyKind::SqrtLassoIterative: return "sqrt_lasso_iterative";
        case PenaltyKind::LassoKnownSigma: return "lasso_known_sigma";
        case PenaltyKind::SymmetricHeavyTail: return "symmetric_heavy_tail";
        case PenaltyKind::Custom: return "custom";
    }
    return "custom";
}

struct PenaltyParams {
    double c = 1.01;
    double alpha = 0.05;
    double u_n = 0.0;
    double w = 2.0;
    int max_iter = 15;              // K, counted as completed refinements
    double tolerance = 1e-4;        // nu
    std::optional<double> sigma;    // only for the known-sigma lasso
};

// Scalar level lambda and per-column loadings, with the parameters that
// produced them. loadings[j] >= 1 for every scheme the library constructs.
struct PenaltyScheme {
    double lambda = 0.0;
    Vector loadings;
    PenaltyKind kind = PenaltyKind::Custom;
    PenaltyParams params;

    // The known-sigma scheme penalizes the squared criterion; every other
    // kind penalizes its square root.
    bool is_sqrt_objective() const { return kind != PenaltyKind::LassoKnownSigma; }

    void validate(Eigen::Index p) const {
        if (lambda < 0.0) throw InvalidParameter("lambda must be nonnegative");
        if (loadings.size() != p)
            throw DimensionMismatch("loadings size " + std::to_string(loadings.size()) +
                                    " does not match p = " + std::to_string(p));
        for (Eigen::Index j = 0; j < p; ++j)
            if (loadings[j] < 1.0)
                throw InvalidParameter("loading " + std::to_string(j) +
                                       " is below the unit floor");
    }
};

// ----------------------------------------------------------------------------
// Fit result
// ----------------------------------------------------------------------------

struct FitResult {
    Vector beta;
    std::vector<Eigen::Index> support;  // sorted indices of nonzero coefficients
    double q_hat = 0.0;                 // mean squared residual at beta
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline std::vector<Eigen::Index> support_of(const Vector& beta) {
    std::vector<Eigen::Index> s;
    for (Eigen::Index j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) s.push_back(j);
    return s;
}

// Objective of Eq.-style criteria: sqrt(qhat) + (lambda/n)*||Gamma beta||_1 for
// square-root schemes, qhat + (lambda/n)*||Gamma beta||_1 for the known-sigma
// lasso.
inline double objective_value(const Vector& beta, const Dataset& data,
                              const PenaltyScheme& scheme) {
    const double q = q_hat(beta, data);
    const double l1 = scheme.loadings.cwiseProduct(beta.cwiseAbs()).sum();
    const double pen = scheme.lambda / static_cast<double>(data.n()) * l1;
    return (scheme.is_sqrt_objective() ? std::sqrt(q) : q) + pen;
}

// ----------------------------------------------------------------------------
// Oracle target
// ----------------------------------------------------------------------------

// Solution of the bias-variance tradeoff over sparse least squares fits to the
// regression function values. c_s is the root mean square approximation error.
struct OracleTarget {
    Vector beta0;
    Eigen::Index s = 0;
    double c_s = 0.0;
    std::vector<Eigen::Index> support_T;
};

}  // namespace sqrtlasso
