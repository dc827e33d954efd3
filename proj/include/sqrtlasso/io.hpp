#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sqrtlasso/certify.hpp"
#include "sqrtlasso/core.hpp"
#include "sqrtlasso/diagnostics.hpp"
#include "sqrtlasso/penalty.hpp"
#include "sqrtlasso/simulate.hpp"

namespace sqrtlasso {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ----------------------------------------------------------------------------
// Basic conversions
// ----------------------------------------------------------------------------

inline json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline Vector vector_from_json(const json& a, const std::string& path) {
    if (!a.is_array()) throw ConfigError(path + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) throw ConfigError(path + ": expected numbers");
        v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    }
    return v;
}

// ----------------------------------------------------------------------------
// Scheme / fit / certificate serialization
// ----------------------------------------------------------------------------

inline json to_json(const PenaltyScheme& scheme) {
    json j;
    j["lambda"] = scheme.lambda;
    j["loadings"] = to_json(scheme.loadings);
    j["kind"] = to_string(scheme.kind);
    json params;
    params["c"] = scheme.params.c;
    params["alpha"] = scheme.params.alpha;
    params["u_n"] = scheme.params.u_n;
    params["w"] = scheme.params.w;
    params["max_iter"] = scheme.params.max_iter;
    params["tolerance"] = scheme.params.tolerance;
    if (scheme.params.sigma) params["sigma"] = *scheme.params.sigma;
    j["params"] = params;
    return j;
}

inline PenaltyScheme scheme_from_json(const json& j) {
    PenaltyScheme scheme;
    scheme.lambda = j.at("lambda").get<double>();
    scheme.loadings = vector_from_json(j.at("loadings"), "$.loadings");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sqrt_lasso_iterative") scheme.kind = PenaltyKind::SqrtLassoIterative;
    else if (kind == "lasso_known_sigma") scheme.kind = PenaltyKind::LassoKnownSigma;
    else if (kind == "symmetric_heavy_tail") scheme.kind = PenaltyKind::SymmetricHeavyTail;
    else if (kind == "custom") scheme.kind = PenaltyKind::Custom;
    else throw ConfigError("$.kind: unknown penalty kind '" + kind + "'");
    if (j.contains("params")) {
        const json& p = j["params"];
        if (p.contains("c")) scheme.params.c = p["c"].get<double>();
        if (p.contains("alpha")) scheme.params.alpha = p["alpha"].get<double>();
        if (p.contains("u_n")) scheme.params.u_n = p["u_n"].get<double>();
        if (p.contains("w")) scheme.params.w = p["w"].get<double>();
        if (p.contains("max_iter")) scheme.params.max_iter = p["max_iter"].get<int>();
        if (p.contains("tolerance")) scheme.params.tolerance = p["tolerance"].get<double>();
        if (p.contains("sigma")) scheme.params.sigma = p["sigma"].get<double>();
    }
    return scheme;
}

inline json to_json(const FitResult& fit) {
    json j;
    j["beta"] = to_json(fit.beta);
    json support = json::array();
    for (Eigen::Index s : fit.support) support.push_back(s);
    j["support"] = support;
    j["q_hat"] = fit.q_hat;
    j["objective"] = fit.objective;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    return j;
}

inline FitResult fit_from_json(const json& j) {
    FitResult fit;
    fit.beta = vector_from_json(j.at("beta"), "$.beta");
    fit.support = support_of(fit.beta);
    fit.q_hat = j.at("q_hat").get<double>();
    fit.objective = j.at("objective").get<double>();
    fit.iterations = j.value("iterations", 0);
    fit.converged = j.value("converged", true);
    return fit;
}

inline json to_json(const Certificate& cert) {
    json j;
    j["dual_a"] = to_json(cert.dual_a);
    j["max_constraint_violation"] = cert.max_constraint_violation;
    j["active_sign_gap"] = cert.active_sign_gap;
    j["ball_slack"] = cert.ball_slack;
    j["gap"] = cert.gap;
    j["feasible_after_scaling"] = cert.feasible_after_scaling;
    j["primal_only"] = cert.primal_only;
    return j;
}

inline json to_json(const LoadingTrace& trace) {
    json j;
    json loadings = json::array();
    for (const Vector& v : trace.loadings) loadings.push_back(to_json(v));
    j["loadings"] = loadings;
    j["max_changes"] = trace.max_changes;
    j["stop_reason"] = to_string(trace.stop_reason);
    return j;
}

inline json to_json(const DesignReport& rep) {
    json j;
    json lo = json::object(), hi = json::object();
    for (const auto& [m, v] : rep.phi_min) lo[std::to_string(m)] = v;
    for (const auto& [m, v] : rep.phi_max) hi[std::to_string(m)] = v;
    j["phi_min"] = lo;
    j["phi_max"] = hi;
    j["re_lower_bound"] = rep.re_lower_bound;
    j["kappa_bar_estimate"] =
        rep.kappa_bar_estimate ? json(*rep.kappa_bar_estimate) : json(nullptr);
    j["varrho_estimate"] = rep.varrho_estimate ? json(*rep.varrho_estimate) : json(nullptr);
    j["event_holds"] = rep.event_holds ? json(*rep.event_holds) : json(nullptr);
    j["score_sup"] = rep.score_sup ? json(*rep.score_sup) : json(nullptr);
    j["exact_enumeration"] = rep.exact_enumeration;
    j["enumeration_count"] = rep.enumeration_count;
    return j;
}

// ----------------------------------------------------------------------------
// Monte Carlo config / report serialization
// ----------------------------------------------------------------------------

inline Estimator estimator_from_string(const std::string& s, const std::string& path) {
    if (s == "lasso_known_sigma") return Estimator::LassoKnownSigma;
    if (s == "ols_post_lasso") return Estimator::OlsPostLasso;
    if (s == "sqrt_lasso") return Estimator::SqrtLasso;
    if (s == "ols_post_sqrt_lasso") return Estimator::OlsPostSqrtLasso;
    if (s == "ideal_sqrt_lasso") return Estimator::IdealSqrtLasso;
    if (s == "ols_post_ideal_sqrt_lasso") return Estimator::OlsPostIdealSqrtLasso;
    if (s == "oracle") return Estimator::OracleEstimator;
    throw ConfigError(path + ": unknown estimator '" + s + "'");
}

inline json to_json(const McConfig& cfg) {
    json j;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["rho_toeplitz"] = cfg.rho_toeplitz;
    j["beta_star_rule"] = to_string(cfg.beta_star_rule);
    if (cfg.beta_star_rule == BetaStarRule::Custom)
        j["custom_beta_star"] = to_json(cfg.custom_beta_star);
    j["error_law"] = to_string(cfg.error_law);
    j["sigma"] = cfg.sigma_grid;
    j["n_reps"] = cfg.n_reps;
    j["seed"] = cfg.seed;
    json est = json::array();
    for (Estimator e : cfg.estimators) est.push_back(to_string(e));
    j["estimators"] = est;
    j["loading_rule"] = to_string(cfg.loading_rule);
    j["mc_alpha"] = cfg.mc_alpha;
    j["mc_c"] = cfg.mc_c;
    if (cfg.lambda_override > 0.0) j["lambda_override"] = cfg.lambda_override;
    j["threads"] = cfg.threads;
    return j;
}

inline McConfig mc_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("$: expected a JSON object");
    McConfig cfg;
    auto require_positive_int = [&](const char* key) -> Eigen::Index {
        if (!j.contains(key)) throw ConfigError(std::string("$.") + key + ": missing");
        if (!j[key].is_number_integer() || j[key].get<long long>() < 1)
            throw ConfigError(std::string("$.") + key + ": expected positive integer");
        return static_cast<Eigen::Index>(j[key].get<long long>());
    };
    cfg.n = require_positive_int("n");
    cfg.p = require_positive_int("p");
    if (j.contains("rho_toeplitz")) {
        if (!j["rho_toeplitz"].is_number())
            throw ConfigError("$.rho_toeplitz: expected number");
        cfg.rho_toeplitz = j["rho_toeplitz"].get<double>();
        if (cfg.rho_toeplitz < 0.0 || cfg.rho_toeplitz >= 1.0)
            throw ConfigError("$.rho_toeplitz: expected value in [0,1)");
    }
    if (j.contains("beta_star_rule")) {
        const std::string r = j["beta_star_rule"].get<std::string>();
        if (r == "inv_j_3_2") cfg.beta_star_rule = BetaStarRule::InvJ32;
        else if (r == "inv_j_2") cfg.beta_star_rule = BetaStarRule::InvJ2;
        else if (r == "custom") cfg.beta_star_rule = BetaStarRule::Custom;
        else throw ConfigError("$.beta_star_rule: unknown rule '" + r + "'");
    }
    if (cfg.beta_star_rule == BetaStarRule::Custom) {
        if (!j.contains("custom_beta_star"))
            throw ConfigError("$.custom_beta_star: required for the custom rule");
        cfg.custom_beta_star = vector_from_json(j["custom_beta_star"], "$.custom_beta_star");
    }
    if (j.contains("error_law")) {
        const std::string law = j["error_law"].get<std::string>();
        if (law == "gaussian") cfg.error_law = ErrorLaw::Gaussian;
        else if (law == "t4_scaled") cfg.error_law = ErrorLaw::T4Scaled;
        else if (law == "heteroskedastic_gaussian")
            cfg.error_law = ErrorLaw::HeteroskedasticGaussian;
        else if (law == "t2") cfg.error_law = ErrorLaw::T2;
        else throw ConfigError("$.error_law: unknown law '" + law + "'");
    }
    const char* sigma_key = j.contains("sigma") ? "sigma" : "sigma_grid";
    if (j.contains(sigma_key)) {
        const json& s = j[sigma_key];
        cfg.sigma_grid.clear();
        if (s.is_number()) {
            cfg.sigma_grid.push_back(s.get<double>());
        } else if (s.is_array()) {
            for (const auto& v : s) {
                if (!v.is_number())
                    throw ConfigError(std::string("$.") + sigma_key + ": expected numbers");
                cfg.sigma_grid.push_back(v.get<double>());
            }
        } else {
            throw ConfigError(std::string("$.") + sigma_key +
                              ": expected a number or an array");
        }
        for (double v : cfg.sigma_grid)
            if (v < 0.0)
                throw ConfigError(std::string("$.") + sigma_key + ": sigma must be >= 0");
    }
    if (j.contains("n_reps")) {
        if (!j["n_reps"].is_number_integer() || j["n_reps"].get<long long>() < 1)
            throw ConfigError("$.n_reps: expected positive integer");
        cfg.n_reps = j["n_reps"].get<int>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw ConfigError("$.seed: expected integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("estimators")) {
        if (!j["estimators"].is_array()) throw ConfigError("$.estimators: expected array");
        cfg.estimators.clear();
        for (std::size_t i = 0; i < j["estimators"].size(); ++i)
            cfg.estimators.push_back(estimator_from_string(
                j["estimators"][i].get<std::string>(),
                "$.estimators[" + std::to_string(i) + "]"));
    }
    if (j.contains("loading_rule")) {
        const std::string r = j["loading_rule"].get<std::string>();
        if (r == "unit_loadings") cfg.loading_rule = LoadingRule::UnitLoadings;
        else if (r == "algorithm1") cfg.loading_rule = LoadingRule::Algorithm1;
        else if (r == "symmetric_scheme") cfg.loading_rule = LoadingRule::SymmetricScheme;
        else throw ConfigError("$.loading_rule: unknown rule '" + r + "'");
    }
    if (j.contains("mc_alpha")) cfg.mc_alpha = j["mc_alpha"].get<double>();
    if (j.contains("mc_c")) cfg.mc_c = j["mc_c"].get<double>();
    if (j.contains("lambda_override")) cfg.lambda_override = j["lambda_override"].get<double>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    return cfg;
}

inline json summary_json(const McReport& report) {
    json j;
    j["config"] = to_json(report.config);
    json cells = json::array();
    for (const McCell& c : report.cells) {
        json cell;
        cell["estimator"] = to_string(c.estimator);
        cell["sigma"] = c.sigma;
        cell["mean_risk"] = c.mean_risk;
        cell["bias_norm"] = c.bias_norm;
        cell["mean_support"] = c.mean_support;
        cell["event_coverage"] = c.event_coverage ? json(*c.event_coverage) : json(nullptr);
        cell["n_failed"] = c.n_failed;
        cell["n_ok"] = c.n_ok;
        cells.push_back(cell);
    }
    j["cells"] = cells;
    return j;
}

// One row per (estimator, sigma); the plot data for the figure analogues.
inline std::string report_csv(const McReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "estimator,sigma,mean_risk,bias_norm,mean_support,event_coverage,n_failed,n_ok\n";
    for (const McCell& c : report.cells) {
        out << to_string(c.estimator) << ',' << c.sigma << ',' << c.mean_risk << ','
            << c.bias_norm << ',' << c.mean_support << ',';
        if (c.event_coverage) out << *c.event_coverage;
        out << ',' << c.n_failed << ',' << c.n_ok << '\n';
    }
    return out.str();
}

// ----------------------------------------------------------------------------
// Run manifest and file plumbing
// ----------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string digest_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

// Write-then-rename so readers never observe a partial file.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

struct RunManifest {
    std::string subcommand;
    json parameters;
    std::map<std::string, std::string> input_digests;  // path -> fnv1a64 hex
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string created_utc;

    void stamp_now() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        created_utc = buf;
    }

    void add_input(const std::string& path) {
        input_digests[path] = digest_hex(read_file_bytes(path));
    }
};

inline json to_json(const RunManifest& m) {
    json j;
    j["subcommand"] = m.subcommand;
    j["parameters"] = m.parameters;
    j["input_digests"] = m.input_digests;
    j["seed"] = m.seed;
    j["tool_version"] = m.tool_version;
    j["created_utc"] = m.created_utc;
    return j;
}

}  // namespace sqrtlasso
