#include "fishcoh/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace fishcoh {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_error("complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json real_vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector real_vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) parse_error(std::string(what) + " entries must be numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}


json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) parse_error("matrix must be an array of rows");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) parse_error("matrix rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k]);
    }
  }
  return m;
}

json state_to_json(const DensityMatrix& rho) {
  return json{{"dim", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}};
}

DensityMatrix state_from_json(const json& j) {
  const json& dim = require(j, "dim");
  if (!dim.is_number_integer() || dim.get<int>() < 1) parse_error("dim must be a positive integer");
  const ComplexMatrix m = matrix_from_json(require(j, "matrix"));
  if (m.rows() != dim.get<int>() || m.cols() != dim.get<int>()) {
    throw Error(ErrorCode::NonSquare, "matrix shape does not match dim");
  }
  return DensityMatrix::from_matrix(m);
}

json kraus_to_json(const IncoherentKraus& k) {
  json c = json::array();
  for (Eigen::Index n = 0; n < k.c.size(); ++n) c.push_back(complex_to_json(k.c(n)));
  return json{{"g", k.g}, {"c", c}, {"r", real_vector_to_json(k.r)}};
}

IncoherentKraus kraus_from_json(const json& j) {
  const json& g = require(j, "g");
  const json& c = require(j, "c");
  if (!g.is_array() || !c.is_array()) parse_error("g and c must be arrays");
  std::vector<int> labels;
  for (const auto& v : g) {
    if (!v.is_number_integer()) parse_error("g entries must be integers");
    labels.push_back(v.get<int>());
  }
  ComplexVector coeffs(static_cast<Eigen::Index>(c.size()));
  for (std::size_t n = 0; n < c.size(); ++n) {
    coeffs(static_cast<Eigen::Index>(n)) = complex_from_json(c[n]);
  }
  RealVector rates = j.contains("r") ? real_vector_from_json(j.at("r"), "r")
                                     : RealVector::Zero(coeffs.size());
  return IncoherentKraus::make(std::move(labels), std::move(coeffs), std::move(rates));
}

json io_to_json(const ParametrizedIO& io) {
  json kraus = json::array();
  for (const auto& k : io.kraus()) kraus.push_back(kraus_to_json(k));
  return json{{"dim", io.dim()}, {"theta0", io.theta0()}, {"kraus", kraus}};
}

ParametrizedIO io_from_json(const json& j) {
  const json& dim = require(j, "dim");
  if (!dim.is_number_integer() || dim.get<int>() < 1) parse_error("dim must be a positive integer");
  const double theta0 = j.contains("theta0") ? j.at("theta0").get<double>() : 0.0;
  const json& kraus = require(j, "kraus");
  if (!kraus.is_array()) parse_error("kraus must be an array");
  std::vector<IncoherentKraus> ops;
  for (const auto& k : kraus) ops.push_back(kraus_from_json(k));
  return ParametrizedIO(dim.get<int>(), theta0, std::move(ops));
}

json validity_to_json(const ValidityReport& report) {
  json groups = json::array();
  for (const auto& grp : report.groups) {
    json blocks = json::array();
    for (const auto& b : grp.blocks) {
      blocks.push_back(json{{"members", b.members}, {"diagonal", real_vector_to_json(b.diagonal)}});
    }
    groups.push_back(json{{"rate", real_vector_to_json(grp.rate)},
                          {"members", grp.members},
                          {"off_diagonal", grp.off_diagonal},
                          {"blocks", blocks}});
  }
  json out{{"valid", report.valid},
           {"certificate", std::string(to_string(report.certificate))},
           {"residual_theta0", report.residual_theta0},
           {"groups", groups}};
  if (!report.grid_thetas.empty()) {
    out["grid_thetas"] = report.grid_thetas;
    out["grid_max_residual"] = report.grid_max_residual;
  }
  if (report.failure) {
    out["failure"] = std::string(to_string(*report.failure));
    out["failing_theta"] = report.failing_theta ? json(*report.failing_theta) : json(nullptr);
    out["message"] = report.message;
  }
  return out;
}

json datum_to_json(const FisherDatum& fd) { return json{{"p", fd.p}, {"d", fd.d}}; }

json budget_to_json(const OptimizerBudget& budget) {
  return json{{"restarts", budget.restarts},
              {"group_counts", budget.group_counts},
              {"outcomes_per_group", budget.outcomes_per_group},
              {"max_iterations", budget.max_iterations},
              {"gradient_step", budget.gradient_step},
              {"seed", budget.seed}};
}

void merge_budget(const json& j, OptimizerBudget& budget) {
  if (!j.is_object()) parse_error("budget must be an object");
  try {
    if (j.contains("restarts")) budget.restarts = j.at("restarts").get<int>();
    if (j.contains("group_counts")) budget.group_counts = j.at("group_counts").get<std::vector<int>>();
    if (j.contains("outcomes_per_group")) budget.outcomes_per_group = j.at("outcomes_per_group").get<int>();
    if (j.contains("max_iterations")) budget.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("gradient_step")) budget.gradient_step = j.at("gradient_step").get<double>();
    if (j.contains("seed")) budget.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    parse_error(std::string("budget: ") + e.what());
  }
}

json point_to_json(const StructuredFamilyPoint& pt) {
  json groups = json::array();
  for (const auto& g : pt.groups) {
    groups.push_back(json{{"delta", real_vector_to_json(g.delta)},
                          {"frame", matrix_to_json(g.frame)},
                          {"rate", real_vector_to_json(g.rate)}});
  }
  return json{{"dim", pt.dim}, {"groups", groups}};
}

json report_to_json(const CoherenceReport& report) {
  json values = json::array();
  for (double v : report.restart_values) values.push_back(number_or_null(v));
  json out{{"lower_bound", report.lower_bound},
           {"label", report.label},
           {"theta0", report.theta0},
           {"restarts", report.restarts},
           {"best_restart", report.best_restart},
           {"failed_restarts", report.failed_restarts},
           {"restart_values", values},
           {"restart_group_counts", report.restart_group_counts},
           {"best_point", point_to_json(report.best_point)}};
  out["analytic"] = report.analytic_value ? json(*report.analytic_value) : json(nullptr);
  if (report.analytic_value) out["analytic_provenance"] = report.analytic_provenance;
  return out;
}

AxiomSuiteConfig axiom_config_from_json(const json& j) {
  AxiomSuiteConfig cfg;
  if (!j.is_object()) parse_error("axiom config must be an object");
  try {
    if (j.contains("dims")) cfg.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("budget")) merge_budget(j.at("budget"), cfg.budget);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      auto& out = cfg.tolerances;
      if (t.contains("nonnegativity")) out.nonnegativity = t.at("nonnegativity").get<double>();
      if (t.contains("witness")) out.witness = t.at("witness").get<double>();
      if (t.contains("monotonicity")) out.monotonicity = t.at("monotonicity").get<double>();
      if (t.contains("strong_monotonicity")) out.strong_monotonicity = t.at("strong_monotonicity").get<double>();
      if (t.contains("convexity")) out.convexity = t.at("convexity").get<double>();
      if (t.contains("lower_bound_slack")) out.lower_bound_slack = t.at("lower_bound_slack").get<double>();
    }
  } catch (const json::exception& e) {
    parse_error(std::string("axiom config: ") + e.what());
  }
  cfg.check();
  return cfg;
}

json axiom_config_to_json(const AxiomSuiteConfig& cfg) {
  const auto& t = cfg.tolerances;
  return json{{"dims", cfg.dims},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"budget", budget_to_json(cfg.budget)},
              {"tolerances",
               {{"nonnegativity", t.nonnegativity},
                {"witness", t.witness},
                {"monotonicity", t.monotonicity},
                {"strong_monotonicity", t.strong_monotonicity},
                {"convexity", t.convexity},
                {"lower_bound_slack", t.lower_bound_slack}}}};
}

json verdict_to_json(const AxiomVerdict& verdict) {
  auto records = [](const std::vector<TrialRecord>& recs) {
    json out = json::array();
    for (const auto& r : recs) {
      json op = json::array();
      for (const auto& k : r.operation) op.push_back(kraus_to_json(k));
      out.push_back(json{{"seed", r.seed},
                         {"dim", r.dim},
                         {"trial", r.trial},
                         {"margin", r.margin},
                         {"state", matrix_to_json(r.state)},
                         {"operation", op},
                         {"detail", r.detail}});
    }
    return out;
  };
  return json{{"axiom", std::string(to_string(verdict.axiom))},
              {"passed", verdict.passed()},
              {"trials", verdict.trials},
              {"worst_margin", verdict.worst_margin},
              {"failures", records(verdict.failures)},
              {"suspicious", records(verdict.suspicious)},
              {"notes", verdict.notes}};
}

json golden_to_json(const GoldenReport& report) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    cases.push_back(json{{"name", c.name},
                         {"expected", c.expected},
                         {"tolerance", c.tolerance},
                         {"computed", c.computed},
                         {"provenance", c.provenance},
                         {"passed", c.passed}});
  }
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
  }
  return json{{"cases", cases}, {"checks", checks}, {"all_passed", report.all_passed}};
}

std::string state_hash(const DensityMatrix& rho) {
  const std::string text = state_to_json(rho).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fishcoh
