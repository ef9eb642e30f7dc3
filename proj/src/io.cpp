#include "advcal/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "advcal/errors.hpp"

namespace advcal::io {

std::string format_g17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void require_keys(const json& obj, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional,
                  const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& k : required)
    if (!obj.contains(k)) throw ConfigError(context + ": missing key '" + k + "'");
  for (const auto& [k, v] : obj.items()) {
    if (std::find(required.begin(), required.end(), k) != required.end()) continue;
    if (std::find(optional.begin(), optional.end(), k) != optional.end()) continue;
    throw ConfigError(context + ": unknown key '" + k + "'");
  }
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

MarginLoss loss_from_json(const json& j) {
  require_keys(j, {"kind"}, {"params"}, "loss");
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (kind == "zero_one") {
    require_keys(params, {}, {}, "loss.params");
    return MarginLoss::zero_one();
  }
  if (kind == "rho_margin") {
    require_keys(params, {"rho"}, {}, "loss.params");
    return MarginLoss::rho_margin(params.at("rho").get<double>());
  }
  if (kind == "hinge") {
    require_keys(params, {}, {}, "loss.params");
    return MarginLoss::hinge();
  }
  if (kind == "logistic") {
    require_keys(params, {}, {}, "loss.params");
    return MarginLoss::logistic();
  }
  if (kind == "exponential") {
    require_keys(params, {}, {}, "loss.params");
    return MarginLoss::exponential();
  }
  if (kind == "custom_table") {
    require_keys(params, {"points"}, {"props"}, "loss.params");
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : params.at("points"))
      pts.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    LossProps props;
    if (params.contains("props")) {
      const json& p = params.at("props");
      require_keys(p, {},
                   {"convex", "non_increasing", "bounded", "continuous",
                    "quasi_concave_even"},
                   "loss.params.props");
      props.convex = p.value("convex", false);
      props.non_increasing = p.value("non_increasing", false);
      props.bounded = p.value("bounded", false);
      props.continuous = p.value("continuous", false);
      props.quasi_concave_even = p.value("quasi_concave_even", false);
    }
    return MarginLoss::custom_table(std::move(pts), props);
  }
  throw ConfigError("loss: unknown kind '" + kind + "'");
}

json loss_to_json(const MarginLoss& loss) {
  json j;
  switch (loss.kind()) {
    case LossKind::zero_one:
      j["kind"] = "zero_one";
      break;
    case LossKind::rho_margin:
      j["kind"] = "rho_margin";
      j["params"] = {{"rho", loss.rho()}};
      break;
    case LossKind::hinge:
      j["kind"] = "hinge";
      break;
    case LossKind::logistic:
      j["kind"] = "logistic";
      break;
    case LossKind::exponential:
      j["kind"] = "exponential";
      break;
    case LossKind::custom_table:
      j["kind"] = "custom_table";
      break;
  }
  return j;
}

MonotoneFn link_from_json(const json& j) {
  require_keys(j, {"kind"}, {"points", "csv"}, "link");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return MonotoneFn::identity();
  if (kind == "relu") return MonotoneFn::relu();
  if (kind == "table") {
    if (j.contains("csv")) return link_from_csv(j.at("csv").get<std::string>());
    if (!j.contains("points")) throw ConfigError("link: table needs points or csv");
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : j.at("points"))
      pts.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    return MonotoneFn::table(std::move(pts));
  }
  throw ConfigError("link: unknown kind '" + kind + "'");
}

MonotoneFn link_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("link_from_csv: cannot open " + path);
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError("link_from_csv: expected two comma-separated columns");
    try {
      pts.emplace_back(std::stod(line.substr(0, comma)),
                       std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError("link_from_csv: malformed row '" + line + "'");
    }
  }
  return MonotoneFn::table(std::move(pts));  // rejects any decrease
}

HypothesisFamily family_from_json(const json& j) {
  require_keys(j, {"kind"},
               {"dim", "bias_bound", "link", "width", "u_l1_bound",
                "w_norm_bound", "value_bound"},
               "family");
  const std::string kind = j.at("kind").get<std::string>();
  const int dim = j.value("dim", 2);
  if (kind == "linear") return HypothesisFamily::linear(dim);
  if (kind == "glm") {
    if (!j.contains("link")) throw ConfigError("family: glm needs a link");
    return HypothesisFamily::glm(dim, link_from_json(j.at("link")),
                                 j.value("bias_bound", 1.0));
  }
  if (kind == "relu_glm")
    return HypothesisFamily::relu_glm(dim, j.value("bias_bound", 1.0));
  if (kind == "one_layer_nn")
    return HypothesisFamily::one_layer_nn(dim, j.value("width", 2),
                                          j.value("u_l1_bound", 1.0),
                                          j.value("w_norm_bound", 1.0));
  if (kind == "all_measurable")
    return HypothesisFamily::all_measurable(dim, j.value("value_bound", 2.0));
  throw ConfigError("family: unknown kind '" + kind + "'");
}

json family_to_json(const HypothesisFamily& family) {
  json j;
  j["kind"] = family.kind_name();
  j["dim"] = family.dim;
  switch (family.kind) {
    case FamilyKind::glm:
    case FamilyKind::relu_glm:
      j["bias_bound"] = family.bias_bound;
      break;
    case FamilyKind::one_layer_nn:
      j["width"] = family.width;
      j["u_l1_bound"] = family.u_l1_bound;
      j["w_norm_bound"] = family.w_norm_bound;
      break;
    case FamilyKind::all_measurable:
      j["value_bound"] = family.value_bound;
      break;
    case FamilyKind::linear:
      break;
  }
  return j;
}

Surrogate surrogate_from_json(const json& j) {
  require_keys(j, {"form"}, {"loss"}, "surrogate");
  const std::string form = j.at("form").get<std::string>();
  if (form == "adv01") return Surrogate::adversarial01();
  if (!j.contains("loss")) throw ConfigError("surrogate: missing loss");
  MarginLoss loss = loss_from_json(j.at("loss"));
  if (form == "plain") return Surrogate::plain(std::move(loss));
  if (form == "sup") return Surrogate::sup(std::move(loss));
  throw ConfigError("surrogate: unknown form '" + form + "'");
}

json surrogate_to_json(const Surrogate& s) {
  json j;
  j["form"] = s.form == LossForm::plain  ? "plain"
              : s.form == LossForm::sup_based ? "sup"
                                              : "adv01";
  if (s.form != LossForm::adv01) j["loss"] = loss_to_json(s.loss);
  return j;
}

json hypothesis_to_json(const HypothesisPoint& h) {
  json j;
  j["family"] = h.family.kind_name();
  switch (h.family.kind) {
    case FamilyKind::linear:
      j["w"] = h.w;
      break;
    case FamilyKind::glm:
    case FamilyKind::relu_glm:
      j["w"] = h.w;
      j["b"] = h.b;
      break;
    case FamilyKind::one_layer_nn:
      j["u"] = h.u;
      j["W"] = h.W;
      break;
    case FamilyKind::all_measurable:
      j["pair"] = {h.lo, h.hi};
      break;
  }
  return j;
}

HypothesisPoint hypothesis_from_json(const HypothesisFamily& family, const json& j) {
  switch (family.kind) {
    case FamilyKind::linear: {
      require_keys(j, {"w"}, {}, "point");
      return HypothesisPoint::linear(family, j.at("w").get<std::vector<double>>());
    }
    case FamilyKind::glm:
    case FamilyKind::relu_glm: {
      require_keys(j, {"w", "b"}, {}, "point");
      return HypothesisPoint::glm(family, j.at("w").get<std::vector<double>>(),
                                  j.at("b").get<double>());
    }
    case FamilyKind::one_layer_nn: {
      require_keys(j, {"u", "W"}, {}, "point");
      return HypothesisPoint::one_layer_nn(
          family, j.at("u").get<std::vector<double>>(),
          j.at("W").get<std::vector<std::vector<double>>>());
    }
    case FamilyKind::all_measurable: {
      require_keys(j, {"pair"}, {}, "point");
      const auto pair = j.at("pair").get<std::vector<double>>();
      if (pair.size() != 2) throw ConfigError("point: pair must have two entries");
      return HypothesisPoint::all_measurable(family, pair[0], pair[1]);
    }
  }
  throw ConfigError("point: unknown family");
}

ParamGridSpec param_grid_from_json(const json& j) {
  ParamGridSpec spec;
  require_keys(j, {},
               {"angles", "biases", "pair_axis", "nn_u", "nn_w_radii",
                "nn_w_angles", "oracle_per_axis", "interval_points"},
               "grids");
  spec.angles = j.value("angles", spec.angles);
  spec.biases = j.value("biases", spec.biases);
  spec.pair_axis = j.value("pair_axis", spec.pair_axis);
  spec.nn_u = j.value("nn_u", spec.nn_u);
  spec.nn_w_radii = j.value("nn_w_radii", spec.nn_w_radii);
  spec.nn_w_angles = j.value("nn_w_angles", spec.nn_w_angles);
  return spec;
}

GridSpecs grids_from_json(const json& j) {
  GridSpecs grids;
  grids.params = param_grid_from_json(j);
  grids.oracle.per_axis = j.value("oracle_per_axis", grids.oracle.per_axis);
  grids.interval_points = j.value("interval_points", grids.interval_points);
  return grids;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

json property_report_to_json(const MarginLoss& loss, const PropertyReport& report) {
  json j;
  j["loss"] = loss.name();
  json checks = json::array();
  for (const auto& c : report.checks) {
    json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["worst_violation"] = c.worst_violation;
    cj["at"] = c.at;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

json margins_to_json(const MarginPair& m) {
  json j;
  j["lower"] = m.lower;
  j["upper"] = m.upper;
  j["method"] = m.method == MarginMethod::closed_form ? "closed_form" : "grid_oracle";
  return j;
}

json calibration_value_to_json(const CalibrationValue& v) {
  json j;
  j["infinite"] = v.infinite;
  j["method"] = method_name(v.method);
  if (!v.infinite) {
    j["value"] = v.value;
    if (v.witness) j["witness"] = hypothesis_to_json(*v.witness);
  }
  return j;
}

json delta_cell_to_json(const DeltaCell& cell) {
  json j;
  j["epsilon"] = cell.epsilon;
  j["x_norm"] = cell.x_norm;
  j["eta"] = cell.eta;
  j["infinite"] = cell.value.infinite;
  j["method"] = method_name(cell.value.method);
  if (!cell.value.infinite) {
    j["value"] = cell.value.value;
    if (cell.value.witness) j["witness"] = hypothesis_to_json(*cell.value.witness);
  }
  return j;
}

json verdict_to_json(const VerdictReport& report) {
  json j;
  j["verdict"] = report.verdict;
  j["tol"] = report.tol;
  j["gamma"] = report.gamma;
  j["surrogate"] = report.surrogate_name;
  j["family"] = report.family_name;
  j["method"] = report.method;
  j["finite_count"] = report.finite_count;
  j["infinite_count"] = report.infinite_count;
  if (report.has_finite) {
    j["min_finite_delta"] = report.min_finite_delta;
    j["at_epsilon"] = report.at_epsilon;
    j["at_x_norm"] = report.at_x_norm;
    j["at_eta"] = report.at_eta;
    if (report.witness) j["witness"] = hypothesis_to_json(*report.witness);
  }
  return j;
}

json theorem_verdict_to_json(const TheoremVerdict& verdict) {
  json j;
  j["id"] = verdict.id;
  j["predicted"] = predicted_name(verdict.predicted);
  json conds = json::array();
  for (const auto& c : verdict.conditions) {
    json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["violating_t"] = c.violating_t;
    cj["lhs"] = c.lhs;
    cj["rhs"] = c.rhs;
    conds.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conds);
  j["discrepancy"] = verdict.discrepancy;
  if (!verdict.discrepancy_note.empty())
    j["discrepancy_note"] = verdict.discrepancy_note;
  if (!verdict.note.empty()) j["note"] = verdict.note;
  if (verdict.crosscheck_min_finite_delta)
    j["crosscheck_min_finite_delta"] = *verdict.crosscheck_min_finite_delta;
  j["crosscheck_agrees"] = verdict.crosscheck_agrees;
  return j;
}

json witness_to_json(const NegativeWitness& w, const Surrogate& surrogate,
                     const HypothesisFamily& family, double gamma) {
  json j;
  j["surrogate"] = surrogate_name(surrogate);
  j["family"] = family.kind_name();
  j["gamma"] = gamma;
  j["x0"] = w.x0;
  j["f0"] = hypothesis_to_json(w.f0);
  j["eta"] = w.eta;
  j["epsilon"] = w.epsilon;
  j["surrogate_inner_risk"] = w.surrogate_inner_risk;
  j["expected_inner_risk"] = w.expected_inner_risk;
  j["delta"] = calibration_value_to_json(w.delta);
  return j;
}

json experiment_report_to_json(const ExperimentReport& report) {
  json j;
  j["surrogate"] = report.surrogate_name;
  j["family"] = report.family_name;
  j["gamma"] = report.gamma;
  j["seed"] = report.seed;
  j["n_train"] = report.n_train;
  j["n_heldout"] = report.n_heldout;
  j["calibrated_surrogate"] = report.calibrated_surrogate;
  j["checker_note"] = report.checker_note;
  j["minimal_risk"] = report.trace.minimal_risk;
  json trace = json::array();
  for (const auto& e : report.trace.entries) {
    json ej;
    ej["iteration"] = e.iteration;
    ej["surrogate_risk"] = e.surrogate_risk;
    ej["gap"] = e.gap;
    ej["adv_risk"] = e.adv_risk;
    trace.push_back(std::move(ej));
  }
  j["trace"] = std::move(trace);
  json pairing = json::array();
  for (const auto& row : report.pairing) {
    json pj;
    pj["gap_threshold"] = row.gap_threshold;
    pj["max_adv_risk"] = row.max_adv_risk;
    pairing.push_back(std::move(pj));
  }
  j["pairing"] = std::move(pairing);
  j["final_train_adv_risk"] = report.final_train_adv_risk;
  j["heldout_adv_risk"] = report.heldout_adv_risk;
  j["asserted"] = report.asserted;
  j["assertion_passed"] = report.assertion_passed;
  return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string witness_params_field(const HypothesisPoint& h) {
  std::ostringstream out;
  switch (h.family.kind) {
    case FamilyKind::linear:
      out << "w=";
      for (std::size_t i = 0; i < h.w.size(); ++i)
        out << (i ? "|" : "") << format_g17(h.w[i]);
      break;
    case FamilyKind::glm:
    case FamilyKind::relu_glm:
      out << "w=";
      for (std::size_t i = 0; i < h.w.size(); ++i)
        out << (i ? "|" : "") << format_g17(h.w[i]);
      out << ";b=" << format_g17(h.b);
      break;
    case FamilyKind::one_layer_nn:
      out << "u=";
      for (std::size_t i = 0; i < h.u.size(); ++i)
        out << (i ? "|" : "") << format_g17(h.u[i]);
      for (std::size_t jn = 0; jn < h.W.size(); ++jn) {
        out << ";w" << jn << "=";
        for (std::size_t i = 0; i < h.W[jn].size(); ++i)
          out << (i ? "|" : "") << format_g17(h.W[jn][i]);
      }
      break;
    case FamilyKind::all_measurable:
      out << "pair=" << format_g17(h.lo) << "|" << format_g17(h.hi);
      break;
  }
  return out.str();
}

std::string delta_cells_csv(const std::vector<DeltaCell>& cells) {
  std::ostringstream out;
  out << "epsilon,x_norm,eta,delta_max,method,witness_params\n";
  for (const auto& c : cells) {
    out << format_g17(c.epsilon) << ',' << format_g17(c.x_norm) << ','
        << format_g17(c.eta) << ',';
    out << (c.value.infinite ? "inf" : format_g17(c.value.value));
    out << ',' << method_name(c.value.method) << ',';
    if (!c.value.infinite && c.value.witness)
      out << witness_params_field(*c.value.witness);
    out << '\n';
  }
  return out.str();
}

std::string trace_csv(const TrainTrace& trace) {
  std::ostringstream out;
  out << "iteration,surrogate_risk,gap,adv_risk\n";
  for (const auto& e : trace.entries)
    out << e.iteration << ',' << format_g17(e.surrogate_risk) << ','
        << format_g17(e.gap) << ',' << format_g17(e.adv_risk) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Schemas
// ---------------------------------------------------------------------------

namespace {

json make_schema(const std::string& title, json required, json optional) {
  json s;
  s["title"] = title;
  s["type"] = "object";
  s["required"] = std::move(required);
  s["optional"] = std::move(optional);
  s["allow_extra"] = false;
  return s;
}

}  // namespace

std::vector<std::string> schema_names() {
  return {"loss_descriptor",  "family_descriptor", "surrogate_descriptor",
          "property_report",  "margins_report",    "risk_report",
          "delta_max_report", "verdict_report",    "theorem_verdict",
          "witness_report",   "experiment_report"};
}

json schema_for(const std::string& name) {
  if (name == "loss_descriptor")
    return make_schema(name, {{"kind", "string"}}, {{"params", "object"}});
  if (name == "family_descriptor")
    return make_schema(name, {{"kind", "string"}},
                       {{"dim", "integer"},
                        {"bias_bound", "number"},
                        {"link", "object"},
                        {"width", "integer"},
                        {"u_l1_bound", "number"},
                        {"w_norm_bound", "number"},
                        {"value_bound", "number"}});
  if (name == "surrogate_descriptor")
    return make_schema(name, {{"form", "string"}}, {{"loss", "object"}});
  if (name == "property_report")
    return make_schema(name, {{"loss", "string"}, {"checks", "array"}}, {});
  if (name == "margins_report")
    return make_schema(
        name,
        {{"lower", "number"}, {"upper", "number"}, {"method", "string"}},
        {{"x", "array"}, {"gamma", "number"}, {"family", "string"}});
  if (name == "risk_report")
    return make_schema(name, {{"form", "string"}, {"value", "number"}},
                       {{"minimal", "boolean"},
                        {"eta", "number"},
                        {"gamma", "number"},
                        {"family", "string"},
                        {"loss", "string"}});
  if (name == "delta_max_report")
    return make_schema(name,
                       {{"epsilon", "number"},
                        {"x_norm", "number"},
                        {"eta", "number"},
                        {"infinite", "boolean"},
                        {"method", "string"}},
                       {{"value", "number"}, {"witness", "object"}});
  if (name == "verdict_report")
    return make_schema(name,
                       {{"verdict", "string"},
                        {"tol", "number"},
                        {"gamma", "number"},
                        {"surrogate", "string"},
                        {"family", "string"},
                        {"method", "string"},
                        {"finite_count", "integer"},
                        {"infinite_count", "integer"}},
                       {{"min_finite_delta", "number"},
                        {"at_epsilon", "number"},
                        {"at_x_norm", "number"},
                        {"at_eta", "number"},
                        {"witness", "object"}});
  if (name == "theorem_verdict")
    return make_schema(name,
                       {{"id", "string"},
                        {"predicted", "string"},
                        {"conditions", "array"},
                        {"discrepancy", "boolean"},
                        {"crosscheck_agrees", "boolean"}},
                       {{"discrepancy_note", "string"},
                        {"note", "string"},
                        {"crosscheck_min_finite_delta", "number"}});
  if (name == "witness_report")
    return make_schema(name,
                       {{"surrogate", "string"},
                        {"family", "string"},
                        {"gamma", "number"},
                        {"x0", "array"},
                        {"f0", "object"},
                        {"eta", "number"},
                        {"epsilon", "number"},
                        {"surrogate_inner_risk", "number"},
                        {"expected_inner_risk", "number"},
                        {"delta", "object"}},
                       {});
  if (name == "experiment_report")
    return make_schema(name,
                       {{"surrogate", "string"},
                        {"family", "string"},
                        {"gamma", "number"},
                        {"seed", "integer"},
                        {"n_train", "integer"},
                        {"n_heldout", "integer"},
                        {"calibrated_surrogate", "boolean"},
                        {"checker_note", "string"},
                        {"minimal_risk", "number"},
                        {"trace", "array"},
                        {"pairing", "array"},
                        {"final_train_adv_risk", "number"},
                        {"heldout_adv_risk", "number"},
                        {"asserted", "boolean"},
                        {"assertion_passed", "boolean"}},
                       {});
  throw ConfigError("schema_for: unknown schema '" + name + "'");
}

namespace {

bool type_matches(const json& v, const std::string& type) {
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer") return v.is_number_integer() || v.is_number_unsigned();
  if (type == "boolean") return v.is_boolean();
  if (type == "array") return v.is_array();
  if (type == "object") return v.is_object();
  return false;
}

}  // namespace

void validate_against_schema(const json& doc, const json& schema) {
  const std::string title = schema.at("title").get<std::string>();
  if (!doc.is_object())
    throw ConfigError("schema " + title + ": document is not an object");
  const json& required = schema.at("required");
  const json& optional = schema.at("optional");
  for (const auto& [key, type] : required.items()) {
    if (!doc.contains(key))
      throw ConfigError("schema " + title + ": missing required key '" + key + "'");
    if (!type_matches(doc.at(key), type.get<std::string>()))
      throw ConfigError("schema " + title + ": key '" + key + "' has wrong type");
  }
  for (const auto& [key, value] : doc.items()) {
    if (required.contains(key)) continue;
    if (optional.contains(key)) {
      if (!type_matches(value, optional.at(key).get<std::string>()))
        throw ConfigError("schema " + title + ": key '" + key + "' has wrong type");
      continue;
    }
    if (!schema.at("allow_extra").get<bool>())
      throw ConfigError("schema " + title + ": unexpected key '" + key + "'");
  }
}

void self_validate(const std::string& schema_name, const json& doc) {
  validate_against_schema(doc, schema_for(schema_name));
}

}  // namespace advcal::io
