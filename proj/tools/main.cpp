// Command-line front end: parse system/supply/storage configs, run KYP,
// Lur'e, simulation, LQ, and PDE-example analyses, and emit JSON/CSV reports.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dissip/json_io.hpp"

namespace {

using namespace dissip;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;     // analysis ran, certificate negative
constexpr int kExitInput = 2;        // parse/validation failure
constexpr int kExitDivergence = 3;   // numerical divergence
constexpr int kExitUnsupported = 4;  // documented restriction hit

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write '" + path + "'");
    out << content;
}

int cmd_check_kyp(const std::string& config_path, double tol) {
    const AnalysisConfig cfg = load_config(config_path);
    if (!cfg.storage) throw PreconditionError("config: check-kyp requires a storage");
    const KypReport report =
        check_dissipative(cfg.resolved_system(), cfg.resolved_supply(), *cfg.storage, tol);
    emit(to_json(report));
    return report.certificate.is_psd ? kExitOk : kExitNegative;
}

int cmd_lure(const std::string& config_path, double tol) {
    const AnalysisConfig cfg = load_config(config_path);
    if (!cfg.storage) throw PreconditionError("config: lure requires a storage");
    std::optional<KypReport> report;
    try {
        report = lure_factor(cfg.resolved_system(), cfg.resolved_supply(), *cfg.storage, tol);
    } catch (const DefinitenessError& e) {
        emit(Json{{"error", e.what()}, {"min_eigenvalue", e.min_eigenvalue}});
        return kExitNegative;
    }
    const LurePair& lp = *report->lure;
    Json j = to_json(lp);
    Matrix kl(lp.q, report->kyp_matrix.dim());
    kl << lp.K, lp.L;
    j["reconstruction_residual"] = (report->kyp_matrix.entries() - kl.adjoint() * kl).norm();
    emit(j);
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, double t_final, double dt,
                 const std::string& out_path) {
    const AnalysisConfig cfg = load_config(config_path);
    const StateSpaceSystem& sys = cfg.resolved_system();

    const double total_time = t_final > 0 ? t_final : cfg.options.T.value_or(1.0);
    const double step = dt > 0 ? dt : cfg.options.dt.value_or(total_time / 2048.0);
    const Vector x0 = cfg.options.x0.value_or(Vector::Zero(sys.n()));
    const InputSignal input = input_from_json(cfg.options.input, sys, cfg.resolved_supply());

    const Trajectory traj = simulate(sys, x0, input, total_time, step);
    const std::string csv = trajectory_to_csv(traj);
    if (!out_path.empty()) {
        write_file(out_path, csv);
    } else {
        std::cout << csv;
    }

    if (cfg.storage && cfg.supply) {
        std::optional<LurePair> lure;
        try {
            lure = lure_factor(sys, *cfg.supply, *cfg.storage, cfg.options.tol).lure;
        } catch (const DefinitenessError&) {
            // Indefinite KYP matrix: report the balance without a rate integral.
        }
        emit(to_json(dissipation_balance(traj, *cfg.storage, *cfg.supply, lure)));
    }
    return kExitOk;
}

int cmd_lqr(const std::string& config_path, double horizon, int segments, int levels,
            double bound) {
    const AnalysisConfig cfg = load_config(config_path);
    const StateSpaceSystem& sys = cfg.resolved_system();
    const SupplyRate& sr = cfg.resolved_supply();

    const ValueFunction vf = value_function(sys, sr, cfg.options.tol);
    Json j{{"value_function", to_json(vf)}};
    try {
        j["optimal_feedback"] = matrix_to_json(optimal_feedback(sys, sr, vf, cfg.options.tol));
    } catch (const RestrictionError& e) {
        j["optimal_feedback_error"] = e.what();
    }
    if (cfg.options.x0 && sys.m() >= 1) {
        const OracleEstimate est = value_oracle(sys, sr, vf, *cfg.options.x0, horizon,
                                                {segments, levels, bound});
        Json oracle = to_json(est);
        oracle["riccati_value"] = vf.eval(*cfg.options.x0);
        j["oracle"] = std::move(oracle);
    }
    emit(j);
    return kExitOk;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

int cmd_example(const std::string& name, int n, const std::string& alpha_str,
                const std::string& check, const std::string& study,
                const std::string& out_path, double tol) {
    if (name == "transport") {
        TransportConfig cfg;
        cfg.n = n;
        if (!alpha_str.empty()) {
            std::stringstream ss(alpha_str);
            double re = 0.0, im = 0.0;
            char comma = 0;
            ss >> re;
            if (ss >> comma >> im && comma != ',') {
                throw PreconditionError("--alpha expects RE or RE,IM");
            }
            cfg.alpha = Complex(re, im);
        }
        if (check == "upwind") {
            const StateSpaceSystem sys = transport_system(cfg);
            const UpwindDissipativePair pair = transport_upwind_dissipative_pair(cfg);
            const KypReport report = lure_factor(sys, pair.supply, pair.storage, tol);
            emit(to_json(report));
            return report.certificate.is_psd ? kExitOk : kExitNegative;
        }
        if (check == "continuum") {
            const HermitianMatrix m = transport_M(cfg);
            const PsdCertificate cert = check_psd(m, tol);
            emit(Json{{"M", matrix_to_json(m.entries())}, {"certificate", to_json(cert)}});
            return cert.is_psd ? kExitOk : kExitNegative;
        }
        throw PreconditionError("transport: --check must be 'upwind' or 'continuum'");
    }
    if (name == "heat") {
        if (!study.empty()) {
            const auto table = gramian_refinement_study(parse_int_list(study));
            const std::string csv = study_to_csv(table);
            if (!out_path.empty()) {
                write_file(out_path, csv);
            } else {
                std::cout << csv;
            }
            return kExitOk;
        }
        if (check == "gramian") {
            HeatConfig cfg;
            cfg.n = n;
            const StateSpaceSystem sys = heat_system(cfg);
            const KypReport report = lure_factor(sys, heat_supply(cfg), heat_storage(cfg), tol);
            Json j = to_json(report);
            j["kyp_frobenius_norm"] = report.kyp_matrix.frobenius_norm();
            emit(j);
            return report.certificate.is_psd ? kExitOk : kExitNegative;
        }
        throw PreconditionError("heat: use --check gramian or --study n1,n2,...");
    }
    throw PreconditionError("unknown example '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipativity certification for linear systems: KYP inequality, "
                 "Lur'e factorization, trajectory balances, and LQ value functions"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    double tol = kDefaultTol;
    double t_final = 0.0, dt = 0.0;

    auto* check = app.add_subcommand("check-kyp", "Certify the KYP matrix inequality");
    check->add_option("--config", config_path, "JSON config path")->required();
    check->add_option("--tol", tol, "relative PSD tolerance");

    auto* lure = app.add_subcommand("lure", "Lur'e factorization of the KYP matrix");
    lure->add_option("--config", config_path, "JSON config path")->required();
    lure->add_option("--tol", tol, "relative PSD/rank tolerance");

    auto* sim = app.add_subcommand("simulate", "Simulate and report the dissipation balance");
    sim->add_option("--config", config_path, "JSON config path")->required();
    sim->add_option("--T", t_final, "final time (overrides config)");
    sim->add_option("--dt", dt, "step size (overrides config)");
    sim->add_option("--out", out_path, "trajectory CSV output path (default: stdout)");

    double horizon = 10.0, bound = 2.0;
    int segments = 32, levels = 21;
    auto* lqr = app.add_subcommand("lqr", "Value function, optimal feedback, and oracle");
    lqr->add_option("--config", config_path, "JSON config path")->required();
    lqr->add_option("--horizon", horizon, "oracle horizon");
    lqr->add_option("--segments", segments, "oracle control segments");
    lqr->add_option("--levels", levels, "oracle amplitude levels");
    lqr->add_option("--bound", bound, "oracle amplitude bound");

    std::string example_name, alpha_str, check_kind, study;
    int n = 64;
    auto* example = app.add_subcommand("example", "Built-in PDE example pipelines");
    example->add_option("name", example_name, "transport | heat")->required();
    example->add_option("--n", n, "grid size");
    example->add_option("--alpha", alpha_str, "transport mixing parameter RE or RE,IM");
    example->add_option("--check", check_kind, "upwind | continuum | gramian");
    example->add_option("--study", study, "comma-separated grid sizes for the Gramian study");
    example->add_option("--out", out_path, "CSV output path (default: stdout)");
    example->add_option("--tol", tol, "relative tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check_kyp(config_path, tol);
        if (lure->parsed()) return cmd_lure(config_path, tol);
        if (sim->parsed()) return cmd_simulate(config_path, t_final, dt, out_path);
        if (lqr->parsed()) return cmd_lqr(config_path, horizon, segments, levels, bound);
        if (example->parsed()) {
            return cmd_example(example_name, n, alpha_str, check_kind, study, out_path, tol);
        }
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const StabilizabilityError& e) {
        std::cerr << "error: " << e.what() << " (offending eigenvalues:";
        for (const auto& z : e.offending_eigenvalues) {
            std::cerr << " " << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag())
                      << "i";
        }
        std::cerr << ")\n";
        return kExitUnsupported;
    } catch (const RestrictionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
