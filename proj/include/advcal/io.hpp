#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "advcal/consistency.hpp"

namespace advcal::io {

using json = nlohmann::ordered_json;

// Lossless float formatting for CSV: '.' decimal, 17 significant digits,
// locale-independent.
std::string format_g17(double v);

// Strict object parsing: every listed required key must be present, no key
// outside required+optional is accepted.
void require_keys(const json& obj, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional,
                  const std::string& context);

MarginLoss loss_from_json(const json& j);
json loss_to_json(const MarginLoss& loss);
MonotoneFn link_from_json(const json& j);
// Two-column CSV (s, g(s)); rejected unless non-decreasing.
MonotoneFn link_from_csv(const std::string& path);
HypothesisFamily family_from_json(const json& j);
json family_to_json(const HypothesisFamily& family);
Surrogate surrogate_from_json(const json& j);
json surrogate_to_json(const Surrogate& s);
json hypothesis_to_json(const HypothesisPoint& h);
HypothesisPoint hypothesis_from_json(const HypothesisFamily& family, const json& j);
ParamGridSpec param_grid_from_json(const json& j);
GridSpecs grids_from_json(const json& j);

json property_report_to_json(const MarginLoss& loss, const PropertyReport& report);
json margins_to_json(const MarginPair& m);
json calibration_value_to_json(const CalibrationValue& v);
json delta_cell_to_json(const DeltaCell& cell);
json verdict_to_json(const VerdictReport& report);
json theorem_verdict_to_json(const TheoremVerdict& verdict);
json witness_to_json(const NegativeWitness& w, const Surrogate& surrogate,
                     const HypothesisFamily& family, double gamma);
json experiment_report_to_json(const ExperimentReport& report);

// CSV artifacts.
std::string witness_params_field(const HypothesisPoint& h);
std::string delta_cells_csv(const std::vector<DeltaCell>& cells);
std::string trace_csv(const TrainTrace& trace);

// Minimal shallow schema dialect shipped under /schemas: required/optional
// key -> type-name maps with an allow_extra flag. Every emitted JSON report
// is validated against its schema before it is written.
std::vector<std::string> schema_names();
json schema_for(const std::string& name);
void validate_against_schema(const json& doc, const json& schema);
void self_validate(const std::string& schema_name, const json& doc);

}  // namespace advcal::io
