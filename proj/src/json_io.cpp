#include "dissip/json_io.hpp"

#include <fstream>
#include <sstream>

namespace dissip {

namespace {

[[noreturn]] void fail(const std::string& what) { throw PreconditionError("config: " + what); }

double number_from_json(const Json& j, const char* what) {
    if (!j.is_number()) fail(std::string(what) + " must be a number");
    return j.get<double>();
}

}  // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Complex(j[0].get<double>(), j[1].get<double>());
    }
    fail("complex entry must be a number or [re, im]");
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array()) fail("matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Matrix(0, 0);
    if (!j[0].is_array()) fail("matrix rows must be arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
            fail("matrix rows must have equal length");
        }
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
    return arr;
}

Vector vector_from_json(const Json& j) {
    if (!j.is_array()) fail("vector must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j[i]);
    return v;
}

Json to_json(const PsdCertificate& cert) {
    return Json{{"is_psd", cert.is_psd},
                {"min_eigenvalue", cert.min_eigenvalue},
                {"tolerance_used", cert.tolerance_used}};
}

Json to_json(const LurePair& lp) {
    return Json{{"K", matrix_to_json(lp.K)}, {"L", matrix_to_json(lp.L)}, {"q", lp.q}};
}

Json to_json(const KypReport& report) {
    Json j{{"kyp_matrix", matrix_to_json(report.kyp_matrix.entries())},
           {"certificate", to_json(report.certificate)}};
    if (report.lure) j["lure"] = to_json(*report.lure);
    return j;
}

Json to_json(const BalanceReport& report) {
    Json j{{"delta_storage", report.delta_storage},
           {"supply_integral", report.supply_integral},
           {"lhs", report.lhs},
           {"residual", report.residual}};
    if (report.rate_integral) j["rate_integral"] = *report.rate_integral;
    return j;
}

Json to_json(const ValueFunction& vf) {
    return Json{{"P_val", matrix_to_json(vf.P_val.entries())},
                {"care_residual", vf.care_residual},
                {"closed_loop_spectral_abscissa", vf.closed_loop_spectral_abscissa}};
}

Json to_json(const OracleEstimate& est) {
    return Json{{"x0", vector_to_json(est.x0)},
                {"horizon", est.horizon},
                {"estimate", est.estimate},
                {"estimate_no_tail", est.estimate_no_tail},
                {"control_class", est.control_class}};
}

Json to_json(const StateSpaceSystem& sys) {
    return Json{{"A", matrix_to_json(sys.A)},
                {"B", matrix_to_json(sys.B)},
                {"C", matrix_to_json(sys.C)},
                {"D", matrix_to_json(sys.D)}};
}

Json to_json(const SupplyRate& sr) {
    return Json{{"Q", matrix_to_json(sr.Q.entries())},
                {"S", matrix_to_json(sr.S)},
                {"R", matrix_to_json(sr.R.entries())}};
}

Json to_json(const QuadraticStorage& st) {
    return Json{{"P", matrix_to_json(st.P.entries())}};
}

Json to_json(const std::vector<GramianStudyRow>& table) {
    Json rows = Json::array();
    for (const auto& row : table) {
        rows.push_back(Json{{"n", row.n},
                            {"gram_norm", row.gram_norm},
                            {"form_value", row.form_value}});
    }
    return rows;
}

StateSpaceSystem system_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("A")) fail("system requires matrix A");
    Matrix a = matrix_from_json(j["A"]);
    const Eigen::Index n = a.rows();
    Matrix b = j.contains("B") ? matrix_from_json(j["B"]) : Matrix(n, 0);
    Matrix c = j.contains("C") ? matrix_from_json(j["C"]) : Matrix(0, n);
    if (b.size() == 0) b.resize(n, b.cols());
    if (c.size() == 0) c.resize(c.rows(), n);
    Matrix d = j.contains("D") ? matrix_from_json(j["D"]) : Matrix(c.rows(), b.cols());
    if (d.size() == 0) d.resize(c.rows(), b.cols());
    return StateSpaceSystem(std::move(a), std::move(b), std::move(c), std::move(d));
}

SupplyRate supply_from_json(const Json& j) {
    if (!j.is_object()) fail("supply must be an object");
    if (j.contains("builtin")) {
        const std::string name = j["builtin"].get<std::string>();
        if (name == "scattering") {
            return make_scattering_supply(j.value("p", 1), j.value("m", 1));
        }
        if (name == "impedance") return make_impedance_supply(j.value("m", 1));
        fail("unknown builtin supply '" + name + "'");
    }
    if (!j.contains("Q") || !j.contains("R")) fail("supply requires Q and R");
    Matrix q = matrix_from_json(j["Q"]);
    Matrix r = matrix_from_json(j["R"]);
    Matrix s = j.contains("S") ? matrix_from_json(j["S"]) : Matrix(q.rows(), r.rows());
    if (s.size() == 0) s.resize(q.rows(), r.rows());
    return SupplyRate(HermitianMatrix(q), std::move(s), HermitianMatrix(r));
}

QuadraticStorage storage_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("P")) fail("storage requires matrix P");
    return QuadraticStorage(HermitianMatrix(matrix_from_json(j["P"])));
}

const StateSpaceSystem& AnalysisConfig::resolved_system() const {
    if (!system) fail("no system available");
    return *system;
}

const SupplyRate& AnalysisConfig::resolved_supply() const {
    if (!supply) fail("no supply rate available");
    return *supply;
}

namespace {

TransportConfig transport_from_json(const Json& j) {
    TransportConfig cfg;
    cfg.n = j.value("n", cfg.n);
    if (j.contains("alpha")) cfg.alpha = complex_from_json(j["alpha"]);
    cfg.q = j.value("q", cfg.q);
    if (j.contains("s")) cfg.s = complex_from_json(j["s"]);
    cfg.r = j.value("r", cfg.r);
    return cfg;
}

SupplyRate transport_supply(const TransportConfig& cfg) {
    Matrix q(1, 1), s(1, 1), r(1, 1);
    q(0, 0) = cfg.q;
    s(0, 0) = cfg.s;
    r(0, 0) = cfg.r;
    return SupplyRate(HermitianMatrix(q), std::move(s), HermitianMatrix(r));
}

}  // namespace

AnalysisConfig parse_config(const Json& j) {
    if (!j.is_object()) fail("top level must be an object");
    AnalysisConfig cfg;
    const bool has_system = j.contains("system");
    const bool has_example = j.contains("example");
    if (has_system == has_example) {
        fail("exactly one of 'system' and 'example' must be present");
    }
    if (has_system) {
        cfg.system = system_from_json(j["system"]);
    } else {
        const Json& ex = j["example"];
        if (!ex.is_object() || !ex.contains("name")) fail("example requires a name");
        cfg.example_name = ex["name"].get<std::string>();
        if (*cfg.example_name == "transport") {
            cfg.transport = transport_from_json(ex);
            cfg.system = transport_system(*cfg.transport);
            cfg.supply = transport_supply(*cfg.transport);
        } else if (*cfg.example_name == "heat") {
            HeatConfig hc;
            hc.n = ex.value("n", hc.n);
            cfg.heat = hc;
            cfg.system = heat_system(hc);
            cfg.supply = heat_supply(hc);
            cfg.storage = heat_storage(hc);
        } else {
            fail("unknown example '" + *cfg.example_name + "'");
        }
    }
    if (j.contains("supply")) cfg.supply = supply_from_json(j["supply"]);
    if (j.contains("storage")) cfg.storage = storage_from_json(j["storage"]);
    if (j.contains("options")) {
        const Json& opt = j["options"];
        if (!opt.is_object()) fail("options must be an object");
        if (opt.contains("tol")) cfg.options.tol = number_from_json(opt["tol"], "tol");
        if (opt.contains("dt")) cfg.options.dt = number_from_json(opt["dt"], "dt");
        if (opt.contains("T")) cfg.options.T = number_from_json(opt["T"], "T");
        if (opt.contains("x0") && !opt["x0"].is_null()) {
            cfg.options.x0 = vector_from_json(opt["x0"]);
        }
        if (opt.contains("input")) cfg.options.input = opt["input"];
    }

    // Cross-check dimensions on load.
    const StateSpaceSystem& sys = cfg.resolved_system();
    if (cfg.supply && (cfg.supply->p() != sys.p() || cfg.supply->m() != sys.m())) {
        fail("supply dimensions do not match the system");
    }
    if (cfg.storage && cfg.storage->n() != sys.n()) {
        fail("storage dimension does not match the system");
    }
    if (cfg.options.x0 && cfg.options.x0->size() != sys.n()) {
        fail("x0 dimension does not match the system");
    }
    return cfg;
}

AnalysisConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    Json j;
    in >> j;  // throws nlohmann::json::parse_error with line diagnostics
    return parse_config(j);
}

InputSignal input_from_json(const Json& j, const StateSpaceSystem& sys, const SupplyRate& sr) {
    if (j.is_null()) return InputSignal::zero();
    if (!j.is_object()) fail("input must be an object");
    if (j.contains("feedback") && j["feedback"].is_string()) {
        if (j["feedback"].get<std::string>() != "optimal") fail("unknown feedback shorthand");
        const ValueFunction vf = value_function(sys, sr);
        return InputSignal::feedback(optimal_feedback(sys, sr, vf), InputSignal::zero());
    }
    const std::string type = j.value("type", "");
    if (type == "zero") return InputSignal::zero();
    if (type == "constant") return InputSignal::constant(vector_from_json(j.at("value")));
    if (type == "sine") {
        return InputSignal::sine(vector_from_json(j.at("amplitude")),
                                 number_from_json(j.at("frequency"), "frequency"),
                                 j.value("phase", 0.0));
    }
    if (type == "sampled") {
        std::vector<double> times = j.at("times").get<std::vector<double>>();
        std::vector<Vector> values;
        for (const Json& v : j.at("values")) values.push_back(vector_from_json(v));
        return InputSignal::sampled(std::move(times), std::move(values));
    }
    if (type == "feedback") {
        Matrix f = matrix_from_json(j.at("F"));
        InputSignal v = j.contains("v") ? input_from_json(j["v"], sys, sr) : InputSignal::zero();
        return InputSignal::feedback(std::move(f), std::move(v));
    }
    fail("unknown input type '" + type + "'");
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::ostringstream out;
    out.precision(17);
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
    const Eigen::Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
    const Eigen::Index p = traj.outputs.empty() ? 0 : traj.outputs.front().size();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) out << ", x_" << i << "re, x_" << i << "im";
    for (Eigen::Index i = 0; i < m; ++i) out << ", u_" << i << "re, u_" << i << "im";
    for (Eigen::Index i = 0; i < p; ++i) out << ", y_" << i << "re, y_" << i << "im";
    out << "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << traj.times[k];
        for (Eigen::Index i = 0; i < n; ++i) {
            out << ", " << traj.states[k](i).real() << ", " << traj.states[k](i).imag();
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            out << ", " << traj.inputs[k](i).real() << ", " << traj.inputs[k](i).imag();
        }
        for (Eigen::Index i = 0; i < p; ++i) {
            out << ", " << traj.outputs[k](i).real() << ", " << traj.outputs[k](i).imag();
        }
        out << "\n";
    }
    return out.str();
}

std::string study_to_csv(const std::vector<GramianStudyRow>& table) {
    std::ostringstream out;
    out.precision(17);
    out << "n, gram_norm, form_value\n";
    for (const auto& row : table) {
        out << row.n << ", " << row.gram_norm << ", " << row.form_value << "\n";
    }
    return out.str();
}

}  // namespace dissip
