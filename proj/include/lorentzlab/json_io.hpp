#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lorentzlab/concave.hpp"
#include "lorentzlab/harness.hpp"
#include "lorentzlab/optimal_range.hpp"
#include "lorentzlab/rearrangement.hpp"
#include "lorentzlab/report.hpp"
#include "lorentzlab/spectral.hpp"

namespace lorentzlab::json_io {

// Weight-function specs:
//   {"kind":"power","alpha":a} | {"kind":"log1p"} | {"kind":"phi_zero"}
//   | {"kind":"pwl","knots":[[t,v],...]}
nlohmann::json to_json(const concave::ConcaveFn& f);
concave::ConcaveFn concave_from_json(const nlohmann::json& j);

// Accepts inline JSON (first non-space char '{') or a path to a JSON file.
concave::ConcaveFn load_concave_spec(const std::string& inline_or_path);

nlohmann::json to_json(const rearrangement::StepFn& x);
rearrangement::StepFn step_from_json(const nlohmann::json& j);

nlohmann::json to_json(const rearrangement::DecreasingStep& x);
rearrangement::DecreasingStep decreasing_from_json(const nlohmann::json& j);

nlohmann::json to_json(const rearrangement::Seq& a);
rearrangement::Seq seq_from_json(const nlohmann::json& j);

nlohmann::json to_json(const spectral::CMatrix& m);
spectral::CMatrix cmatrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const report::ExperimentReport& r);
nlohmann::json to_json(const range::CriterionReport& r);
nlohmann::json to_json(const range::PsiTable& t);
nlohmann::json to_json(const harness::FreezeOutcome& f);

// {"seed":..., "reports":[...], "freezes":[...], "all_pass":...}
nlohmann::json suite_to_json(const harness::SuiteResult& s, std::uint64_t seed);

// CSV flatteners; all numbers at 12 significant digits.
std::string criterion_csv(const range::CriterionReport& r);  // u,G,phi,ratio
std::string experiment_csv(const report::ExperimentReport& r);  // sample_id,value
std::string psi_csv(const range::PsiTable& t);  // u,psi,w_star

}  // namespace lorentzlab::json_io
