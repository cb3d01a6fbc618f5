#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "dissip/lq.hpp"
#include "dissip/pde.hpp"

namespace dissip {

using Json = nlohmann::json;

// Complex entries serialize as [re, im]; bare numbers parse as real values.
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const PsdCertificate& cert);
Json to_json(const LurePair& lp);
Json to_json(const KypReport& report);
Json to_json(const BalanceReport& report);
Json to_json(const ValueFunction& vf);
Json to_json(const OracleEstimate& est);
Json to_json(const StateSpaceSystem& sys);
Json to_json(const SupplyRate& sr);
Json to_json(const QuadraticStorage& st);
Json to_json(const std::vector<GramianStudyRow>& table);

StateSpaceSystem system_from_json(const Json& j);
SupplyRate supply_from_json(const Json& j);
QuadraticStorage storage_from_json(const Json& j);

struct AnalysisOptions {
    double tol = kDefaultTol;
    std::optional<double> dt;
    std::optional<double> T;
    std::optional<Vector> x0;
    Json input;  // raw input spec; resolved against the system by the caller
};

/// Parsed top-level config: exactly one of an inline system or a builtin
/// example, plus supply, optional storage, optional options.
struct AnalysisConfig {
    std::optional<StateSpaceSystem> system;
    std::optional<std::string> example_name;
    std::optional<TransportConfig> transport;
    std::optional<HeatConfig> heat;
    std::optional<SupplyRate> supply;
    std::optional<QuadraticStorage> storage;
    AnalysisOptions options;

    /// The resolved system (inline or built from the example reference).
    const StateSpaceSystem& resolved_system() const;
    /// The resolved supply (explicit, or the example's canonical supply).
    const SupplyRate& resolved_supply() const;
};

AnalysisConfig parse_config(const Json& j);
AnalysisConfig load_config(const std::string& path);

/// Resolve the "input" option into a signal. The marker
/// {"feedback": "optimal"} yields the LQ-optimal closed loop.
InputSignal input_from_json(const Json& j, const StateSpaceSystem& sys, const SupplyRate& sr);

/// Trajectory CSV with header t, x_<i>re, x_<i>im, ..., u_..., y_...
std::string trajectory_to_csv(const Trajectory& traj);

std::string study_to_csv(const std::vector<GramianStudyRow>& table);

}  // namespace dissip
