#pragma once

#include <json.hpp>
#include <string>

#include "gmnl/canonical.hpp"
#include "gmnl/experiments.hpp"
#include "gmnl/expression.hpp"
#include "gmnl/quantum.hpp"

namespace gmnl {

std::string version_string();  // library name and version

// 64-bit FNV-1a of the canonical dump of `config` plus the version string;
// stamped into every report so outputs identify the producing setup.
std::uint64_t config_digest(const nlohmann::json& config);

nlohmann::json scenario_json(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json behavior_json(const Behavior& b);
Behavior behavior_from_json(const nlohmann::json& j);

// Terms as [{"a": [...], "x": [...], "c": coeff}] in canonical flat order.
nlohmann::json expression_json(const BellExpression& e);
BellExpression expression_from_json(const nlohmann::json& j);

nlohmann::json composed_json(const ComposedInequality& q);

// Complex amplitudes as [re, im] pairs.
nlohmann::json state_json(const PureState& psi);
PureState state_from_json(const nlohmann::json& j);

nlohmann::json canonical_state_json(const CanonicalState& s);
CanonicalState canonical_state_from_json(const nlohmann::json& j);

nlohmann::json report_json(const NoiseThresholdResult& r);
nlohmann::json report_json(const std::vector<ThresholdComparison>& rows);
nlohmann::json report_json(const CertificationBatchReport& r);
nlohmann::json report_json(const QutritSurveyReport& r);
nlohmann::json report_json(const DepthDemoReport& r);

// label,parties,threshold,noiseless margin rows for the comparison table.
std::string threshold_csv(const std::vector<ThresholdComparison>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gmnl
