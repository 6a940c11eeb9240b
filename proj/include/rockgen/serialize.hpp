// JSON (de)serialization: marginal fits, model checkpoints, evaluation
// reports, and generated-set sidecars.

#ifndef ROCKGEN_SERIALIZE_HPP
#define ROCKGEN_SERIALIZE_HPP

#include <string>

#include "json.hpp"
#include "rockgen/ddpm.hpp"
#include "rockgen/gan.hpp"
#include "rockgen/generators.hpp"
#include "rockgen/marginal.hpp"
#include "rockgen/metrics.hpp"

namespace rockgen {

inline constexpr const char* kReportSchemaVersion = "1";

nlohmann::json fit_to_json(const MarginalFit& fit);
MarginalFit fit_from_json(const nlohmann::json& j);

nlohmann::json monte_carlo_to_json(const MonteCarloModel& model);
MonteCarloModel monte_carlo_from_json(const nlohmann::json& j);

nlohmann::json mlp_to_json(const nn::Mlp& net);
nn::Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json gan_to_json(const GanModel& model);
GanModel gan_from_json(const nlohmann::json& j);

nlohmann::json ddpm_to_json(const DdpmModel& model);
DdpmModel ddpm_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const EvaluationReport& report);

// Sidecar recorded next to every generated CSV: engine tag, seed, model info.
nlohmann::json sidecar_json(const DiscontinuitySet& set, const nlohmann::json& model_info);

void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

}  // namespace rockgen

#endif
