// Command-line surface for the square-root lasso toolkit: fit, certify,
// diagnose, and simulate subcommands with CSV/JSON inputs and outputs.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "sqrtlasso/sqrtlasso.hpp"

namespace {

using namespace sqrtlasso;

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("SQRT_LASSO_LOG");
        if (!env) return 0;
        const std::string v(env);
        if (v == "debug") return 2;
        if (v == "info") return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[sqrtlasso] " << msg << "\n";
}

void emit_error(const std::string& type, const std::string& message) {
    json j;
    j["error"] = message;
    j["type"] = type;
    std::cerr << j.dump() << "\n";
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

struct FitArgs {
    std::string input;
    std::string response;
    std::string out_dir = ".";
    double alpha = 0.0;  // 0 = recommended
    double c = 1.01;
    double u_n = -1.0;   // <0 = recommended
    double w = 2.0;
    int max_loading_iters = 15;
    double loading_tol = 1e-4;
    double lambda = 0.0;  // >0 fixes the level
    std::string loadings_file;
    bool post = false;
    std::string method = "cd";
    double tol = 1e-10;
    std::uint64_t seed = 0;
    bool post_refine = false;  // Step 2 uses post-ols residuals
};

PenaltyParams resolve_params(const FitArgs& a, Eigen::Index n) {
    PenaltyParams params = recommended_params(n);
    if (a.alpha > 0.0) params.alpha = a.alpha;
    params.c = a.c;
    if (a.u_n >= 0.0) params.u_n = a.u_n;
    params.w = a.w;
    params.max_iter = a.max_loading_iters;
    params.tolerance = a.loading_tol;
    return params;
}

Vector loadings_from_file(const std::string& path, Eigen::Index p) {
    const json j = json::parse(read_file_bytes(path));
    Vector loadings =
        j.is_array() ? vector_from_json(j, "$") : vector_from_json(j.at("loadings"), "$.loadings");
    if (loadings.size() != p)
        throw ConfigError("loadings file has " + std::to_string(loadings.size()) +
                          " entries, design has " + std::to_string(p) + " columns");
    return loadings;
}

int run_fit(const FitArgs& args) {
    const CsvDataset csv = dataset_from_csv(read_csv(args.input), args.response);
    const Dataset& data = csv.data;
    log_info("loaded " + std::to_string(data.n()) + " rows, " + std::to_string(data.p()) +
             " feature columns");

    SolverOptions options;
    options.tol = args.tol;
    options.method = args.method == "fo" ? SolverMethod::FirstOrder
                                         : SolverMethod::CoordinateDescent;

    PenaltyScheme scheme;
    std::optional<LoadingTrace> trace;
    if (args.lambda > 0.0 || !args.loadings_file.empty()) {
        scheme.kind = PenaltyKind::Custom;
        scheme.loadings = args.loadings_file.empty()
                              ? Vector::Ones(data.p())
                              : loadings_from_file(args.loadings_file, data.p());
        const PenaltyParams params = resolve_params(args, data.n());
        scheme.params = params;
        scheme.lambda = args.lambda > 0.0
                            ? args.lambda
                            : lambda_sqrt_lasso(data.n(), data.p(), params.alpha, params.c,
                                                params.u_n);
    } else {
        const PenaltyParams params = resolve_params(args, data.n());
        Algorithm1Result alg = run_algorithm1(
            data, params,
            [&](const Dataset& d, const PenaltyScheme& s, const Vector* warm) {
                SolverOptions inner = options;
                if (warm) inner.warm_start = *warm;
                return fit_with(d, s, inner);
            },
            args.post_refine);
        scheme = alg.scheme;
        trace = alg.trace;
    }

    const FitResult result = fit_with(data, scheme, options);
    const Certificate cert = check_kkt(result, data, scheme);

    json fit_json = to_json(result);
    Vector beta_original = result.beta.cwiseQuotient(data.col_scales());
    fit_json["beta_original"] = to_json(beta_original);
    fit_json["col_scales"] = to_json(data.col_scales());
    fit_json["feature_names"] = csv.feature_names;
    fit_json["response"] = csv.response;
    fit_json["scheme"] = to_json(scheme);
    if (trace) fit_json["loading_trace"] = to_json(*trace);

    atomic_write_file(join_path(args.out_dir, "fit.json"), fit_json.dump(2) + "\n");
    atomic_write_file(join_path(args.out_dir, "certificate.json"),
                      to_json(cert).dump(2) + "\n");
    if (args.post) {
        const FitResult refit = ols_post(data, result.support);
        json post_json = to_json(refit);
        post_json["beta_original"] = to_json(Vector(refit.beta.cwiseQuotient(data.col_scales())));
        atomic_write_file(join_path(args.out_dir, "post_fit.json"),
                          post_json.dump(2) + "\n");
    }

    RunManifest manifest;
    manifest.subcommand = "fit";
    manifest.parameters = {{"input", args.input},
                           {"response", args.response},
                           {"method", args.method},
                           {"tol", args.tol},
                           {"post", args.post},
                           {"scheme", to_json(scheme)}};
    manifest.seed = args.seed;
    manifest.add_input(args.input);
    manifest.stamp_now();
    atomic_write_file(join_path(args.out_dir, "manifest.json"),
                      to_json(manifest).dump(2) + "\n");
    return 0;
}

int run_certify(const std::string& input, const std::string& response,
                const std::string& fit_path, double tol) {
    const CsvDataset csv = dataset_from_csv(read_csv(input), response);
    const json fit_j = json::parse(read_file_bytes(fit_path));
    const FitResult fit = fit_from_json(fit_j);
    if (!fit_j.contains("scheme"))
        throw ConfigError("$.scheme: fit file does not record its penalty scheme");
    const PenaltyScheme scheme = scheme_from_json(fit_j["scheme"]);
    const Certificate cert = check_kkt(fit, csv.data, scheme, tol);
    std::cout << to_json(cert).dump(2) << "\n";
    return cert.passes(tol) ? 0 : 1;
}

struct DiagnoseArgs {
    std::string input;
    std::string gram;
    std::string response;
    std::vector<int> m_values = {1, 2, 3, 4};
    std::vector<Eigen::Index> support;
    double c_bar = 3.0;
    int samples = 2000;
    std::uint64_t seed = 1;
    bool randomized = false;
    double max_enumeration = 1e6;
};

int run_diagnose(const DiagnoseArgs& args) {
    Matrix gram;
    Vector loadings;
    if (!args.gram.empty()) {
        const CsvTable table = read_csv(args.gram);
        gram = table.values;
        if (gram.rows() != gram.cols())
            throw ConfigError("gram file must be square; got " +
                              std::to_string(gram.rows()) + "x" +
                              std::to_string(gram.cols()));
        loadings = Vector::Ones(gram.cols());
    } else {
        if (args.response.empty())
            throw ConfigError("--response is required with --input");
        const CsvDataset csv = dataset_from_csv(read_csv(args.input), args.response);
        gram = csv.data.x().transpose() * csv.data.x() /
               static_cast<double>(csv.data.n());
        loadings = Vector::Ones(csv.data.p());
    }

    DesignReportOptions opts;
    opts.m_values = args.m_values;
    opts.support_T = args.support;
    opts.c_bar = args.c_bar;
    opts.n_samples = args.samples;
    opts.seed = args.seed;
    opts.eig.allow_randomized = args.randomized;
    opts.eig.max_enumeration = args.max_enumeration;
    opts.eig.seed = args.seed;

    const DesignReport report = design_report(gram, loadings, opts);
    std::cout << to_json(report).dump(2) << "\n";
    return 0;
}

int run_simulate(const std::string& config_path, const std::string& preset,
                 std::uint64_t seed, int threads, const std::string& out_dir) {
    McConfig cfg;
    if (!preset.empty()) {
        cfg = make_preset(preset);
    } else {
        cfg = mc_config_from_json(json::parse(read_file_bytes(config_path)));
    }
    cfg.seed = seed;
    if (threads > 0) cfg.threads = threads;
    cfg.validate();

    log_info("running " + std::to_string(cfg.n_reps) + " replications");
    const McReport report = run_mc(cfg);

    atomic_write_file(join_path(out_dir, "report.csv"), report_csv(report));
    atomic_write_file(join_path(out_dir, "summary.json"),
                      summary_json(report).dump(2) + "\n");

    RunManifest manifest;
    manifest.subcommand = "simulate";
    manifest.parameters = to_json(cfg);
    manifest.seed = seed;
    if (!config_path.empty()) manifest.add_input(config_path);
    manifest.stamp_now();
    atomic_write_file(join_path(out_dir, "manifest.json"),
                      to_json(manifest).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"square-root lasso toolkit"};
    app.require_subcommand(1);

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit the estimator on a CSV dataset");
    fit_cmd->add_option("--input", fit_args.input, "input CSV path")->required();
    fit_cmd->add_option("--response", fit_args.response, "response column name")->required();
    fit_cmd->add_option("--out", fit_args.out_dir, "output directory");
    fit_cmd->add_option("--alpha", fit_args.alpha, "confidence parameter (default 0.05/log n)");
    fit_cmd->add_option("--c", fit_args.c, "slack constant (> 1)");
    fit_cmd->add_option("--u-n", fit_args.u_n, "approximation-error allowance (default 0.1/log n)");
    fit_cmd->add_option("--w", fit_args.w, "initial loading multiplier");
    fit_cmd->add_option("--max-loading-iters", fit_args.max_loading_iters,
                        "loading refinement cap K");
    fit_cmd->add_option("--loading-tol", fit_args.loading_tol, "loading stop tolerance nu");
    fit_cmd->add_option("--lambda", fit_args.lambda, "fixed penalty level override");
    fit_cmd->add_option("--loadings-file", fit_args.loadings_file,
                        "JSON file with fixed loadings");
    fit_cmd->add_flag("--post", fit_args.post, "also write the post-selection OLS refit");
    fit_cmd->add_option("--method", fit_args.method, "solver: cd or fo")
        ->check(CLI::IsMember({"cd", "fo"}));
    fit_cmd->add_option("--tol", fit_args.tol, "solver tolerance");
    fit_cmd->add_option("--seed", fit_args.seed, "root seed");
    fit_cmd->add_flag("--post-refine", fit_args.post_refine,
                      "refine loadings from post-OLS residuals");

    std::string cert_input, cert_response, cert_fit;
    double cert_tol = 1e-6;
    CLI::App* cert_cmd = app.add_subcommand("certify", "check optimality of a stored fit");
    cert_cmd->add_option("--input", cert_input, "input CSV path")->required();
    cert_cmd->add_option("--response", cert_response, "response column name")->required();
    cert_cmd->add_option("--fit", cert_fit, "fit.json path")->required();
    cert_cmd->add_option("--tol", cert_tol, "certification tolerance");

    DiagnoseArgs diag_args;
    CLI::App* diag_cmd = app.add_subcommand("diagnose", "design condition diagnostics");
    diag_cmd->add_option("--input", diag_args.input, "input CSV path");
    diag_cmd->add_option("--gram", diag_args.gram, "gram matrix CSV path");
    diag_cmd->add_option("--response", diag_args.response, "response column name");
    diag_cmd->add_option("--m", diag_args.m_values, "sparse-eigenvalue orders");
    diag_cmd->add_option("--support", diag_args.support, "oracle support indices (0-based)");
    diag_cmd->add_option("--c-bar", diag_args.c_bar, "restricted-set constant");
    diag_cmd->add_option("--samples", diag_args.samples, "cone sampler draws");
    diag_cmd->add_option("--seed", diag_args.seed, "sampler seed");
    diag_cmd->add_flag("--randomized", diag_args.randomized,
                       "subsample supports when enumeration is too large");
    diag_cmd->add_option("--max-enumeration", diag_args.max_enumeration,
                         "exact enumeration cutoff");

    std::string sim_config, sim_preset, sim_out = ".";
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    int sim_threads = 0;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo study");
    sim_cmd->add_option("--config", sim_config, "McConfig JSON path");
    sim_cmd->add_option("--preset", sim_preset,
                        "bundled preset: fig1-desk, fig1-desk-t4, fig4-desk, t2-desk, "
                        "noiseless-1rep");
    sim_cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& v) {
            sim_seed = v;
            sim_seed_set = true;
        },
        "root seed (required)");
    sim_cmd->add_option("--threads", sim_threads, "worker cap (0 = hardware)");
    sim_cmd->add_option("--out", sim_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        emit_error("usage", e.what());
        return 2;
    }

    try {
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (cert_cmd->parsed()) return run_certify(cert_input, cert_response, cert_fit, cert_tol);
        if (diag_cmd->parsed()) {
            if (diag_args.input.empty() == diag_args.gram.empty())
                throw ConfigError("exactly one of --input or --gram is required");
            return run_diagnose(diag_args);
        }
        if (sim_cmd->parsed()) {
            if (sim_config.empty() == sim_preset.empty())
                throw ConfigError("exactly one of --config or --preset is required");
            if (!sim_seed_set)
                throw ConfigError("--seed is required for simulate runs");
            return run_simulate(sim_config, sim_preset, sim_seed, sim_threads, sim_out);
        }
    } catch (const ConfigError& e) {
        emit_error("config", e.what());
        return 2;
    } catch (const CsvError& e) {
        emit_error("csv", e.what());
        return 2;
    } catch (const json::exception& e) {
        emit_error("json", e.what());
        return 2;
    } catch (const InvalidParameter& e) {
        emit_error("parameter", e.what());
        return 2;
    } catch (const EnumerationTooLarge& e) {
        emit_error("enumeration_too_large",
                   std::string(e.what()) + "; rerun with --randomized");
        return 1;
    } catch (const std::exception& e) {
        emit_error("numeric", e.what());
        return 1;
    }
    return 0;
}
