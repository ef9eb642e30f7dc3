// Command-line front end: every engine as a subcommand with JSON config
// input and CSV/JSON artifacts.
//
// Exit codes: 0 success; 1 a requested assertion failed (--expect); 2
// configuration or usage error. Artifacts are written even on exit 1.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "advcal/errors.hpp"
#include "advcal/io.hpp"
#include "advcal/parallel.hpp"

namespace {

using advcal::io::json;

struct GlobalOpts {
  int threads = 1;
  std::optional<std::uint64_t> seed;  // overrides config seeds
  std::string output;                 // artifact path; stdout when empty
  std::string format = "json";
};

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("ADVCAL_OUTPUT_DIR")) p = std::filesystem::path(dir) / p;
  }
  return p;
}

void write_artifact(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const auto p = resolve_output(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw advcal::ConfigError("cannot write " + p.string());
  out << content;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw advcal::ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw advcal::ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

advcal::MarginLoss loss_from_flags(const std::string& kind, double rho) {
  json j;
  j["kind"] = kind;
  if (kind == "rho_margin") j["params"] = {{"rho", rho}};
  return advcal::io::loss_from_json(j);
}

advcal::HypothesisFamily family_from_flags(const std::string& kind, int dim,
                                           double bias_bound,
                                           const std::string& link, int width,
                                           double u_l1, double w_norm,
                                           double value_bound) {
  json j;
  j["kind"] = kind;
  j["dim"] = dim;
  if (kind == "glm") j["link"] = {{"kind", link}};
  if (kind == "glm" || kind == "relu_glm") j["bias_bound"] = bias_bound;
  if (kind == "one_layer_nn") {
    j["width"] = width;
    j["u_l1_bound"] = u_l1;
    j["w_norm_bound"] = w_norm;
  }
  if (kind == "all_measurable") j["value_bound"] = value_bound;
  return advcal::io::family_from_json(j);
}

std::vector<double> doubles_from(const json& cfg, const std::string& plural,
                                 const std::string& singular,
                                 std::vector<double> fallback) {
  if (cfg.contains(plural)) return cfg.at(plural).get<std::vector<double>>();
  if (cfg.contains(singular)) return {cfg.at(singular).get<double>()};
  return fallback;
}

// ---------------------------------------------------------------------------
// Subcommand runners (each returns the process exit code)
// ---------------------------------------------------------------------------

int run_losses(const GlobalOpts& g, const std::string& config) {
  const json cfg = load_config(config);
  advcal::io::require_keys(cfg, {"loss"}, {"ts", "verify", "grid_points"}, "losses");
  const advcal::MarginLoss loss = advcal::io::loss_from_json(cfg.at("loss"));
  if (cfg.value("verify", false)) {
    advcal::GridSpec grid;
    grid.points = cfg.value("grid_points", grid.points);
    const auto report = advcal::verify_loss_properties(loss, grid);
    const json j = advcal::io::property_report_to_json(loss, report);
    advcal::io::self_validate("property_report", j);
    write_artifact(g.output, dump(j));
    return 0;
  }
  std::ostringstream csv;
  csv << "t,value\n";
  for (double t : cfg.value("ts", std::vector<double>{}))
    csv << advcal::io::format_g17(t) << ','
        << advcal::io::format_g17(advcal::eval_loss(loss, t)) << '\n';
  write_artifact(g.output, csv.str());
  return 0;
}

int run_margins(const GlobalOpts& g, const std::string& config) {
  const json cfg = load_config(config);
  advcal::io::require_keys(cfg, {"family", "point", "x", "gamma"},
                           {"oracle", "oracle_per_axis"}, "margins");
  const auto family = advcal::io::family_from_json(cfg.at("family"));
  const auto point = advcal::io::hypothesis_from_json(family, cfg.at("point"));
  const auto x = cfg.at("x").get<std::vector<double>>();
  const double gamma = cfg.at("gamma").get<double>();
  advcal::BallGridSpec oracle;
  oracle.per_axis = cfg.value("oracle_per_axis", oracle.per_axis);
  const advcal::MarginPair m =
      cfg.value("oracle", false)
          ? advcal::margins_oracle(point, x, gamma, oracle)
          : advcal::adversarial_margins(point, x, gamma, oracle);
  json j = advcal::io::margins_to_json(m);
  j["x"] = x;
  j["gamma"] = gamma;
  j["family"] = family.kind_name();
  advcal::io::self_validate("margins_report", j);
  write_artifact(g.output, dump(j));
  return 0;
}

int run_risk(const GlobalOpts& g, const std::string& config) {
  const json cfg = load_config(config);
  advcal::io::require_keys(cfg, {"surrogate", "family", "x", "eta", "gamma"},
                           {"point", "minimal", "grids"}, "risk");
  const auto surrogate = advcal::io::surrogate_from_json(cfg.at("surrogate"));
  const auto family = advcal::io::family_from_json(cfg.at("family"));
  const auto x = cfg.at("x").get<std::vector<double>>();
  const double eta = cfg.at("eta").get<double>();
  const double gamma = cfg.at("gamma").get<double>();
  const bool minimal = cfg.value("minimal", false);
  double value = 0.0;
  if (minimal) {
    advcal::GridSpecs grids;
    if (cfg.contains("grids")) grids = advcal::io::grids_from_json(cfg.at("grids"));
    value = advcal::minimal_inner_risk(surrogate, family, x, eta, gamma, grids);
  } else {
    if (!cfg.contains("point"))
      throw advcal::ConfigError("risk: non-minimal risk needs a point");
    const auto point = advcal::io::hypothesis_from_json(family, cfg.at("point"));
    value = advcal::inner_risk(surrogate, point, x, eta, gamma);
  }
  json j;
  j["form"] = cfg.at("surrogate").at("form").get<std::string>();
  j["value"] = value;
  j["minimal"] = minimal;
  j["eta"] = eta;
  j["gamma"] = gamma;
  j["family"] = family.kind_name();
  advcal::io::self_validate("risk_report", j);
  write_artifact(g.output, dump(j));
  return 0;
}

int run_delta_max(const GlobalOpts& g, const std::string& config,
                  const std::string& csv_path) {
  const json cfg = load_config(config);
  advcal::io::require_keys(cfg, {"surrogate", "family", "gamma"},
                           {"epsilon", "epsilons", "x_norm", "x_norms", "eta",
                            "etas", "method", "grids"},
                           "delta-max");
  const auto surrogate = advcal::io::surrogate_from_json(cfg.at("surrogate"));
  const auto family = advcal::io::family_from_json(cfg.at("family"));
  const double gamma = cfg.at("gamma").get<double>();
  advcal::GridSpecs grids;
  if (cfg.contains("grids")) grids = advcal::io::grids_from_json(cfg.at("grids"));
  const auto epsilons = doubles_from(cfg, "epsilons", "epsilon", {0.5});
  const auto x_norms = doubles_from(cfg, "x_norms", "x_norm", {0.5});
  const auto etas = doubles_from(cfg, "etas", "eta", {0.5});
  const std::string method = cfg.value("method", "reduced");
  if (method != "reduced" && method != "brute" && method != "both")
    throw advcal::ConfigError("delta-max: unknown method '" + method + "'");

  std::vector<advcal::DeltaCell> cells;
  for (double r : x_norms) {
    std::vector<double> x(static_cast<std::size_t>(family.dim), 0.0);
    x[0] = r;
    for (double eps : epsilons)
      for (double eta : etas) {
        advcal::CalibrationQuery q{surrogate, family, gamma, eps, x, eta, grids};
        if (method == "reduced" || method == "both")
          cells.push_back({eps, r, eta, advcal::delta_max_reduced(q)});
        if (method == "brute" || method == "both")
          cells.push_back({eps, r, eta, advcal::delta_max_bruteforce(q)});
      }
  }

  if (!csv_path.empty() || g.format == "csv") {
    const std::string csv = advcal::io::delta_cells_csv(cells);
    write_artifact(csv_path.empty() ? g.output : csv_path, csv);
    if (csv_path.empty()) return 0;
  }
  if (g.format == "json") {
    json j = json::array();
    for (const auto& c : cells) {
      json cj = advcal::io::delta_cell_to_json(c);
      advcal::io::self_validate("delta_max_report", cj);
      j.push_back(std::move(cj));
    }
    write_artifact(g.output, dump(j));
  }
  return 0;
}

int run_verdict(const GlobalOpts& g, const std::string& config,
                const std::string& csv_path, const std::string& expect) {
  const json cfg = load_config(config);
  advcal::io::require_keys(cfg, {"surrogate", "family", "gamma"},
                           {"tol", "grids", "epsilons", "x_norms", "etas"},
                           "verdict");
  const auto surrogate = advcal::io::surrogate_from_json(cfg.at("surrogate"));
  const auto family = advcal::io::family_from_json(cfg.at("family"));
  const double gamma = cfg.at("gamma").get<double>();
  const double tol = cfg.value("tol", 1e-6);
  advcal::GridSpecs grids;
  if (cfg.contains("grids")) grids = advcal::io::grids_from_json(cfg.at("grids"));
  std::optional<advcal::VerdictGrid> grid;
  if (cfg.contains("epsilons") || cfg.contains("x_norms") || cfg.contains("etas")) {
    advcal::VerdictGrid vg = advcal::default_verdict_grid(gamma);
    if (cfg.contains("epsilons"))
      vg.epsilons = cfg.at("epsilons").get<std::vector<double>>();
    if (cfg.contains("x_norms"))
      vg.x_norms = cfg.at("x_norms").get<std::vector<double>>();
    if (cfg.contains("etas")) vg.etas = cfg.at("etas").get<std::vector<double>>();
    grid = vg;
  }
  const advcal::VerdictReport report =
      advcal::calibration_verdict(surrogate, family, gamma, grids, tol, grid);
  const json j = advcal::io::verdict_to_json(report);
  advcal::io::self_validate("verdict_report", j);
  write_artifact(g.output, dump(j));
  if (!csv_path.empty())
    write_artifact(csv_path, advcal::io::delta_cells_csv(report.cells));
  if (!expect.empty()) {
    const std::string got = report.verdict == "calibration-violated" ? "violated"
                                                                     : "calibrated";
    if (got != expect) {
      std::cerr << "verdict: expected " << expect << ", got " << got << "\n";
      return 1;
    }
  }
  return 0;
}

int run_check_theorem(const GlobalOpts& g, const std::string& id, const json& cfg,
                      const std::string& expect) {
  advcal::TheoremVerdict verdict;
  advcal::GridSpecs grids;
  if (cfg.contains("grids")) grids = advcal::io::grids_from_json(cfg.at("grids"));
  const double gamma = cfg.value("gamma", 0.2);
  if (id == "qce-linear") {
    verdict = advcal::check_qce_linear(advcal::io::loss_from_json(cfg.at("loss")), gamma);
  } else if (id == "qce-glm") {
    const auto link = cfg.contains("link")
                          ? advcal::io::link_from_json(cfg.at("link"))
                          : advcal::MonotoneFn::relu();
    verdict = advcal::check_qce_glm(advcal::io::loss_from_json(cfg.at("loss")), link,
                                    cfg.value("bias_bound", 1.0), gamma);
  } else if (id == "relu-corollary") {
    verdict = advcal::check_relu_corollary(advcal::io::loss_from_json(cfg.at("loss")),
                                           cfg.value("bias_bound", 1.5), gamma);
  } else if (id == "sup-rho") {
    verdict = advcal::sup_rho_positive_check(
        cfg.value("rho", 1.0), advcal::io::family_from_json(cfg.at("family")),
        gamma, grids);
  } else if (id == "regularity") {
    std::vector<double> x_norms = cfg.value("x_norms", std::vector<double>{});
    if (x_norms.empty()) {
      const double x_max = cfg.value("x_max", 1.0);
      x_norms = advcal::linspace(x_max / 11.0, x_max, 11);
    }
    verdict = advcal::regularity_theorem_check(
        advcal::io::family_from_json(cfg.at("family")), gamma, x_norms, grids);
  } else {
    throw advcal::ConfigError("check-theorem: unknown id '" + id + "'");
  }
  const json j = advcal::io::theorem_verdict_to_json(verdict);
  advcal::io::self_validate("theorem_verdict", j);
  write_artifact(g.output, dump(j));
  if (!expect.empty() && advcal::predicted_name(verdict.predicted) != expect) {
    std::cerr << "check-theorem: expected " << expect << ", got "
              << advcal::predicted_name(verdict.predicted) << "\n";
    return 1;
  }
  return 0;
}

int run_witness(const GlobalOpts& g, const advcal::Surrogate& surrogate,
                const advcal::HypothesisFamily& family, double gamma) {
  const advcal::NegativeWitness w =
      advcal::convex_negative_witness(surrogate, family, gamma);
  const json j = advcal::io::witness_to_json(w, surrogate, family, gamma);
  advcal::io::self_validate("witness_report", j);
  write_artifact(g.output, dump(j));
  return 0;
}

int run_experiment(const GlobalOpts& g, const std::string& config,
                   const std::string& trace_csv_path, const std::string& expect) {
  const json cfg = load_config(config);
  advcal::io::require_keys(
      cfg, {"surrogate", "family", "gamma", "distribution", "n_train", "n_heldout"},
      {"optimizer", "grids"}, "experiment");
  advcal::ExperimentConfig ec;
  ec.surrogate = advcal::io::surrogate_from_json(cfg.at("surrogate"));
  ec.family = advcal::io::family_from_json(cfg.at("family"));
  ec.gamma = cfg.at("gamma").get<double>();
  ec.n_train = cfg.at("n_train").get<int>();
  ec.n_heldout = cfg.at("n_heldout").get<int>();
  const std::string opt = cfg.value("optimizer", "coordinate-refine");
  if (opt == "grid")
    ec.optimizer = advcal::OptimizerKind::grid;
  else if (opt == "coordinate-refine")
    ec.optimizer = advcal::OptimizerKind::coordinate_refine;
  else
    throw advcal::ConfigError("experiment: unknown optimizer '" + opt + "'");
  if (cfg.contains("grids"))
    ec.params = advcal::io::param_grid_from_json(cfg.at("grids"));

  const json& dj = cfg.at("distribution");
  advcal::io::require_keys(dj, {"r_min"},
                           {"rule_angle", "positive_weight", "seed"},
                           "experiment.distribution");
  if (ec.family.kind != advcal::FamilyKind::linear || ec.family.dim != 2)
    throw advcal::ConfigError(
        "experiment: CLI distributions are linear-rule, d = 2");
  const double angle = dj.value("rule_angle", 0.0);
  advcal::SyntheticDistribution dist;
  dist.family = ec.family;
  dist.f_star = advcal::HypothesisPoint::linear(
      ec.family, {std::cos(angle), std::sin(angle)});
  dist.r_min = dj.at("r_min").get<double>();
  dist.gamma = ec.gamma;
  dist.positive_weight = dj.value("positive_weight", 0.5);
  dist.seed = dj.value("seed", std::uint64_t{7});
  if (g.seed) dist.seed = *g.seed;
  ec.distribution = dist;

  const advcal::ExperimentReport report = advcal::consistency_experiment(ec);
  const json j = advcal::io::experiment_report_to_json(report);
  advcal::io::self_validate("experiment_report", j);
  write_artifact(g.output, dump(j));
  if (!trace_csv_path.empty())
    write_artifact(trace_csv_path, advcal::io::trace_csv(report.trace));
  if (!expect.empty()) {
    if (expect != "zero-adv-risk")
      throw advcal::ConfigError("experiment: unknown expectation '" + expect + "'");
    if (!report.assertion_passed) {
      std::cerr << "experiment: zero-adv-risk assertion failed (heldout risk "
                << report.heldout_adv_risk << ")\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarial surrogate-loss calibration toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--threads", g.threads, "worker threads (0 = auto)");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "override config seeds");
  app.add_option("-o,--output", g.output,
                 "artifact path (default stdout; relative paths resolve "
                 "against ADVCAL_OUTPUT_DIR)");
  app.add_option("--format", g.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string config, csv_path, expect, theorem_id;

  auto* losses = app.add_subcommand("losses", "evaluate or verify a margin loss");
  losses->add_option("--config", config)->required();

  auto* margins = app.add_subcommand("margins", "adversarial margins of a hypothesis");
  margins->add_option("--config", config)->required();

  auto* risk = app.add_subcommand("risk", "inner or minimal inner risk");
  risk->add_option("--config", config)->required();

  auto* delta = app.add_subcommand("delta-max", "calibration function values");
  delta->add_option("--config", config)->required();
  delta->add_option("--csv", csv_path, "also write grid rows as CSV");

  auto* verdict = app.add_subcommand("verdict", "grid-level calibration verdict");
  verdict->add_option("--config", config)->required();
  verdict->add_option("--csv", csv_path, "also write grid rows as CSV");
  verdict->add_option("--expect", expect)
      ->check(CLI::IsMember({"calibrated", "violated"}));

  auto* check = app.add_subcommand("check-theorem", "condition checkers");
  check->add_option("--id", theorem_id)->required();
  check->add_option("--config", config);
  check->add_option("--expect", expect)
      ->check(CLI::IsMember({"calibrated", "not_calibrated", "inapplicable"}));
  std::string loss_kind = "rho_margin", link_kind = "relu", family_kind = "linear";
  double rho = 1.0, gamma = 0.2, bias_bound = 1.5;
  int dim = 2, width = 2;
  double u_l1 = 1.0, w_norm = 1.0, value_bound = 2.0;
  check->add_option("--loss", loss_kind);
  check->add_option("--rho", rho);
  check->add_option("--gamma", gamma);
  check->add_option("--bias-bound", bias_bound);
  check->add_option("--link", link_kind)->check(CLI::IsMember({"identity", "relu"}));
  check->add_option("--family", family_kind);
  check->add_option("--dim", dim);

  auto* witness = app.add_subcommand("witness", "convex-loss zero-excess witness");
  std::string witness_form = "plain";
  witness->add_option("--loss", loss_kind);
  witness->add_option("--rho", rho);
  witness->add_option("--form", witness_form)->check(CLI::IsMember({"plain", "sup"}));
  witness->add_option("--family", family_kind);
  witness->add_option("--gamma", gamma);
  witness->add_option("--dim", dim);
  witness->add_option("--bias-bound", bias_bound);
  witness->add_option("--width", width);
  witness->add_option("--u-l1-bound", u_l1);
  witness->add_option("--w-norm-bound", w_norm);
  witness->add_option("--value-bound", value_bound);
  witness->add_option("--link", link_kind)->check(CLI::IsMember({"identity", "relu"}));

  auto* experiment = app.add_subcommand("experiment", "consistency experiment");
  experiment->add_option("--config", config)->required();
  experiment->add_option("--trace-csv", csv_path);
  experiment->add_option("--expect", expect)
      ->check(CLI::IsMember({"zero-adv-risk"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (seed_opt->count() > 0) g.seed = seed_value;
  advcal::set_threads(g.threads);

  try {
    if (losses->parsed()) return run_losses(g, config);
    if (margins->parsed()) return run_margins(g, config);
    if (risk->parsed()) return run_risk(g, config);
    if (delta->parsed()) return run_delta_max(g, config, csv_path);
    if (verdict->parsed()) return run_verdict(g, config, csv_path, expect);
    if (check->parsed()) {
      json cfg = config.empty() ? json::object() : load_config(config);
      if (!cfg.contains("gamma")) cfg["gamma"] = gamma;
      if (!cfg.contains("loss")) {
        json lj;
        lj["kind"] = loss_kind;
        if (loss_kind == "rho_margin") lj["params"] = {{"rho", rho}};
        cfg["loss"] = lj;
      }
      if (!cfg.contains("bias_bound")) cfg["bias_bound"] = bias_bound;
      if (!cfg.contains("rho")) cfg["rho"] = rho;
      if (!cfg.contains("link")) cfg["link"] = {{"kind", link_kind}};
      if (!cfg.contains("family")) {
        cfg["family"] = advcal::io::family_to_json(family_from_flags(
            family_kind, dim, bias_bound, link_kind, width, u_l1, w_norm,
            value_bound));
      }
      return run_check_theorem(g, theorem_id, cfg, expect);
    }
    if (witness->parsed()) {
      const advcal::MarginLoss loss = loss_from_flags(loss_kind, rho);
      const advcal::Surrogate s = witness_form == "plain"
                                      ? advcal::Surrogate::plain(loss)
                                      : advcal::Surrogate::sup(loss);
      const advcal::HypothesisFamily fam = family_from_flags(
          family_kind, dim, bias_bound, link_kind, width, u_l1, w_norm,
          value_bound);
      return run_witness(g, s, fam, gamma);
    }
    if (experiment->parsed()) return run_experiment(g, config, csv_path, expect);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
