#pragma once

// JSON views of parameters and results. Complex numbers become {"re", "im"}.

#include "json.hpp"

#include "optocool/config.hpp"
#include "optocool/cooling.hpp"
#include "optocool/covariance.hpp"
#include "optocool/spectra.hpp"
#include "optocool/steady_state.hpp"
#include "optocool/trajectory.hpp"

namespace optocool {

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const SystemParams& p);
nlohmann::json to_json(const NoiseModel& n);
nlohmann::json to_json(const MeasurementParams& mp);
nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const SteadyState& ss);
nlohmann::json to_json(const MeasurementSteadyState& ss);
nlohmann::json to_json(const CoolingReport& r);
nlohmann::json to_json(const EnsembleResult& r, bool include_per_trajectory = false);
nlohmann::json to_json(const RouthHurwitzReport& r);
nlohmann::json to_json(const BackactionFlags& f);
nlohmann::json to_json(const PhononEstimate& e);

/// Flattens nested objects/arrays into dotted keys (`a.b`, `a.0`), in key order.
std::vector<std::pair<std::string, std::string>> flatten(const nlohmann::json& j);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);

}  // namespace optocool
