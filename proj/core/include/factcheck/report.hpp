#ifndef FACTCHECK_REPORT_HPP
#define FACTCHECK_REPORT_HPP

#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "factcheck/eval.hpp"
#include "factcheck/inference.hpp"
#include "factcheck/rules.hpp"

namespace factcheck {

using Json = nlohmann::ordered_json;

// Key/value snapshot of the run configuration, echoed into every JSON
// document so outputs are reproducible from the report alone.
using ConfigEcho = std::map<std::string, std::string>;

Json triple_to_json(const Triple& t);
Json evidence_to_json(const EvidenceFact& e);
Json explanation_to_json(const Explanation& e);
Json verdict_to_json(const Verdict& v, const Claim& claim, const ConfigEcho& config);
Json eval_result_to_json(const EvalResult& result, Mode mode, const ConfigEcho& config);
Json ruleset_to_json(const RuleSet& rs);

// LABEL : claim, then one arrow-prefixed line listing each fired rule's
// evidence facts.
void render_verdict_text(const Verdict& v, const Claim& claim, std::ostream& out);

// Correct/Incorrect/Undecided counts plus Precision/Recall/F-score rows.
void render_eval_table(const EvalResult& result, Mode mode, std::ostream& out);

}  // namespace factcheck

#endif
