#include "fishcoh/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fishcoh/fisher.hpp"
#include "fishcoh/json_io.hpp"

namespace fishcoh {

namespace {

struct Options {
  std::string state_path;
  std::string io_path;
  std::string config_path;
  std::string csv_path;
  double theta0 = 0.0;
  std::optional<int> restarts;
  std::vector<int> groups;
  std::optional<std::uint64_t> seed;
};

struct Outcome {
  json inputs = json::object();
  json result = json::object();
  json diagnostics = json::array();
  int exit_code = kExitOk;
  // CSV row fields
  std::string hash;
  double value = std::nan("");
  std::string provenance;
  double theta0 = 0.0;
};

std::string diagnostic(const Error& e) {
  return std::string(to_string(e.code())) + ": " + e.detail();
}

void append_csv(const std::string& path, const std::string& command, const Outcome& o) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream csv(path, std::ios::app);
  if (!csv) throw Error(ErrorCode::ParseError, "cannot open " + path + " for appending");
  if (fresh) csv << "command,state_hash,theta0,value,provenance\n";
  csv.precision(17);
  csv << command << ',' << o.hash << ',' << o.theta0 << ',';
  if (std::isfinite(o.value)) csv << o.value;
  csv << ',' << '"' << o.provenance << '"' << '\n';
}

DensityMatrix load_state(const Options& opt, Outcome& o) {
  DensityMatrix rho = state_from_json(load_json_file(opt.state_path));
  o.inputs["state"] = opt.state_path;
  o.hash = state_hash(rho);
  o.inputs["state_hash"] = o.hash;
  return rho;
}

ParametrizedIO load_io(const Options& opt, Outcome& o) {
  ParametrizedIO io = io_from_json(load_json_file(opt.io_path));
  o.inputs["io"] = opt.io_path;
  return io;
}

void run_coherence(const Options& opt, Outcome& o) {
  const DensityMatrix rho = load_state(opt, o);
  OptimizerBudget budget;
  if (!opt.config_path.empty()) {
    merge_budget(load_json_file(opt.config_path), budget);
    o.inputs["config"] = opt.config_path;
  }
  if (opt.restarts) budget.restarts = *opt.restarts;
  if (!opt.groups.empty()) budget.group_counts = opt.groups;
  if (opt.seed) budget.seed = *opt.seed;
  o.inputs["theta0"] = opt.theta0;
  o.inputs["budget"] = budget_to_json(budget);

  const CoherenceReport report = maximize_coherence(rho, opt.theta0, budget);
  o.result = report_to_json(report);
  for (const auto& d : report.diagnostics) o.diagnostics.push_back(d);
  o.value = report.lower_bound;
  o.provenance = report.label;
}

void run_fi(const Options& opt, Outcome& o) {
  const DensityMatrix rho = load_state(opt, o);
  const ParametrizedIO io = load_io(opt, o);
  require_valid(io);
  const FisherDatum fd = postselect_distribution(io, rho);
  const double fi = classical_fi(fd);
  o.result = json{{"fi", fi}, {"theta0", io.theta0()}, {"distribution", datum_to_json(fd)}};
  o.value = fi;
  o.provenance = "post-selection FI";
  o.theta0 = io.theta0();
}

void run_qfi(const Options& opt, Outcome& o) {
  const DensityMatrix rho = load_state(opt, o);
  const ParametrizedIO io = load_io(opt, o);
  const StateDerivativePair sd = state_derivative(io, rho);
  const double qfi = qfi_sld(sd);
  const double fi = classical_fi(postselect_distribution(io, rho));
  o.result = json{{"qfi", qfi}, {"fi", fi}, {"theta0", io.theta0()}};
  o.value = qfi;
  o.provenance = "SLD QFI";
  o.theta0 = io.theta0();
}

void run_validate(const Options& opt, Outcome& o) {
  const ParametrizedIO io = load_io(opt, o);
  const ValidityReport report = validate_io(io);
  o.result = validity_to_json(report);
  o.value = report.residual_theta0;
  o.provenance = std::string(to_string(report.certificate));
  o.theta0 = io.theta0();
  if (!report.valid) {
    o.exit_code = kExitValidation;
    const std::string code = report.failure ? std::string(to_string(*report.failure)) : "InvalidIO";
    o.diagnostics.push_back(code + ": " + report.message);
  }
}

void run_axioms(const Options& opt, Outcome& o) {
  AxiomSuiteConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = axiom_config_from_json(load_json_file(opt.config_path));
    o.inputs["config"] = opt.config_path;
  }
  if (opt.seed) cfg.seed = *opt.seed;
  cfg.check();
  o.inputs["suite"] = axiom_config_to_json(cfg);

  json verdicts = json::array();
  int failures = 0;
  for (const auto& v : run_axiom_suite(cfg)) {
    verdicts.push_back(verdict_to_json(v));
    failures += static_cast<int>(v.failures.size());
    if (!v.passed()) o.diagnostics.push_back(std::string(to_string(v.axiom)) + " violated");
  }
  o.result = json{{"verdicts", verdicts}, {"failures", failures}};
  o.value = failures;
  o.provenance = "axiom failures";
  if (failures > 0) o.exit_code = kExitValidation;
}

void run_repro(const Options&, Outcome& o) {
  const GoldenReport report = run_golden_suite();
  o.result = golden_to_json(report);
  if (!report.cases.empty()) {
    o.value = report.cases.front().computed;
    o.provenance = report.cases.front().name;
  }
  for (const auto& c : report.cases) {
    if (!c.passed) o.diagnostics.push_back(c.name + " mismatch");
  }
  for (const auto& c : report.checks) {
    if (!c.passed) o.diagnostics.push_back(c.name + " failed: " + c.detail);
  }
  if (!report.all_passed) o.exit_code = kExitValidation;
}

void run_witness(const Options& opt, Outcome& o) {
  const DensityMatrix rho = load_state(opt, o);
  o.inputs["theta0"] = opt.theta0;
  const ParametrizedIO io = witness_io(rho, opt.theta0);
  const double fi = classical_fi(postselect_distribution(io, rho));
  o.result = json{{"fi", fi}, {"io", io_to_json(io)}};
  o.value = fi;
  o.provenance = "witness operation";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher-information coherence toolkit", "fishcoh"};
  app.require_subcommand(1, 1);
  Options opt;

  auto add_state = [&](CLI::App* sub) {
    sub->add_option("--state", opt.state_path, "density matrix JSON file")->required();
  };
  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--io", opt.io_path, "parametrized IO JSON file")->required();
  };
  auto add_theta = [&](CLI::App* sub) {
    sub->add_option("--theta0", opt.theta0, "operating point")->default_val(0.0);
  };
  auto add_csv = [&](CLI::App* sub) {
    sub->add_option("--csv", opt.csv_path, "append a result row to this CSV file");
  };

  auto* coherence = app.add_subcommand("coherence", "lower bound on the coherence measure");
  add_state(coherence);
  add_theta(coherence);
  coherence->add_option("--restarts", opt.restarts, "optimizer restarts");
  coherence->add_option("--groups", opt.groups, "group counts cycled over restarts")->delimiter(',');
  coherence->add_option("--seed", opt.seed, "optimizer seed");
  coherence->add_option("--config", opt.config_path, "optimizer budget JSON file");
  add_csv(coherence);

  auto* fi = app.add_subcommand("fi", "post-selection Fisher information of a state and IO");
  add_state(fi);
  add_io(fi);
  add_csv(fi);

  auto* qfi = app.add_subcommand("qfi", "SLD quantum Fisher information of the output family");
  add_state(qfi);
  add_io(qfi);
  add_csv(qfi);

  auto* validate = app.add_subcommand("validate", "check that an IO file describes a valid operation");
  add_io(validate);
  add_csv(validate);

  auto* axioms = app.add_subcommand("axioms", "randomized checks of the coherence-measure axioms");
  axioms->add_option("--config", opt.config_path, "suite configuration JSON file");
  axioms->add_option("--seed", opt.seed, "suite seed");
  add_csv(axioms);

  auto* repro = app.add_subcommand("repro", "recompute the reference values");
  add_csv(repro);

  auto* witness = app.add_subcommand("witness", "explicit IO with positive FI for a coherent state");
  add_state(witness);
  add_theta(witness);
  add_csv(witness);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Outcome o;
  o.theta0 = opt.theta0;
  try {
    if (sub == coherence) run_coherence(opt, o);
    else if (sub == fi) run_fi(opt, o);
    else if (sub == qfi) run_qfi(opt, o);
    else if (sub == validate) run_validate(opt, o);
    else if (sub == axioms) run_axioms(opt, o);
    else if (sub == repro) run_repro(opt, o);
    else run_witness(opt, o);
  } catch (const Error& e) {
    o.result = nullptr;
    o.diagnostics.push_back(diagnostic(e));
    o.exit_code = kExitValidation;
  }

  if (!opt.csv_path.empty() && o.exit_code == kExitOk) {
    try {
      append_csv(opt.csv_path, command, o);
    } catch (const std::exception& e) {
      o.diagnostics.push_back(std::string("csv: ") + e.what());
      o.exit_code = kExitValidation;
    }
  }

  json doc{{"command", command},
           {"inputs", o.inputs},
           {"result", o.result},
           {"diagnostics", o.diagnostics}};
  out << doc.dump(2) << '\n';
  return o.exit_code;
}

}  // namespace fishcoh
