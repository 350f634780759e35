#pragma once

#include <filesystem>

#include <json.hpp>

#include "fishcoh/axioms.hpp"
#include "fishcoh/iochannel.hpp"
#include "fishcoh/optimize.hpp"
#include "fishcoh/repro.hpp"

namespace fishcoh {

using json = nlohmann::json;

// File formats. Complex numbers are [re, im] pairs, matrices row-major
// arrays of rows, basis indices 0-based.
//
//   state:  {"dim": d, "matrix": [[[re, im], ...], ...]}
//   io:     {"dim": d, "theta0": t,
//            "kraus": [{"g": [...], "c": [[re, im], ...], "r": [...]}, ...]}
//   budget: {"restarts", "group_counts", "outcomes_per_group",
//            "max_iterations", "gradient_step", "seed"}  (all optional)
//
// Parsers throw Error: ParseError for structural problems, or the code of
// the violated invariant (NotHermitian, NotTraceOne, InvalidKraus, ...).

json load_json_file(const std::filesystem::path& path);

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

json kraus_to_json(const IncoherentKraus& k);
IncoherentKraus kraus_from_json(const json& j);

json io_to_json(const ParametrizedIO& io);
ParametrizedIO io_from_json(const json& j);

json validity_to_json(const ValidityReport& report);
json datum_to_json(const FisherDatum& fd);

json budget_to_json(const OptimizerBudget& budget);
/// Fields missing from j keep the values already in budget.
void merge_budget(const json& j, OptimizerBudget& budget);

json point_to_json(const StructuredFamilyPoint& pt);
json report_to_json(const CoherenceReport& report);

AxiomSuiteConfig axiom_config_from_json(const json& j);
json axiom_config_to_json(const AxiomSuiteConfig& cfg);
json verdict_to_json(const AxiomVerdict& verdict);

json golden_to_json(const GoldenReport& report);

/// 64-bit FNV-1a of the state's canonical JSON text, as 16 hex digits.
std::string state_hash(const DensityMatrix& rho);

}  // namespace fishcoh
