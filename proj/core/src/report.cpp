#include "factcheck/report.hpp"

#include <cmath>
#include <ostream>

namespace factcheck {

namespace {

std::string term_json_value(const Term& t) { return t.value; }

std::string kind_name(TermKind kind) {
    switch (kind) {
        case TermKind::Entity: return "entity";
        case TermKind::StringLit: return "string";
        case TermKind::NumberLit: return "number";
        case TermKind::DateLit: return "date";
    }
    return "?";
}

Json weight_to_json(const Weight& w) {
    if (w.hard) return Json("alpha");
    return Json(w.value);
}

std::string claim_text(const Claim& claim) {
    const Triple& t = claim.triple;
    return t.predicate + "(" + t.subject.value + ", " + t.object.value + ")";
}

}  // namespace

Json triple_to_json(const Triple& t) {
    return Json{{"subject", term_json_value(t.subject)},
                {"predicate", t.predicate},
                {"object", term_json_value(t.object)},
                {"object_kind", kind_name(t.object.kind)}};
}

Json evidence_to_json(const EvidenceFact& e) {
    Json j = triple_to_json(e.triple);
    j["provenance"] = e.provenance == Provenance::Kg ? "kg" : "oracle";
    j["confidence"] = e.confidence;
    j["weight"] = weight_to_json(e.weight);
    return j;
}

namespace {

Json entry_to_json(const ExplanationEntry& entry) {
    Json substitution = Json::object();
    for (const auto& [var, term] : entry.substitution.bindings)
        substitution[var] = term_json_value(term);
    Json body = Json::array();
    for (const auto& fact : entry.body) body.push_back(evidence_to_json(fact));
    return Json{{"rule", entry.rule_id},
                {"weight", weight_to_json(entry.weight)},
                {"substitution", substitution},
                {"body", body}};
}

}  // namespace

Json explanation_to_json(const Explanation& e) {
    Json supporting = Json::array();
    for (const auto& entry : e.supporting) supporting.push_back(entry_to_json(entry));
    Json conflicting = Json::array();
    for (const auto& entry : e.conflicting) conflicting.push_back(entry_to_json(entry));
    return Json{{"supporting", supporting}, {"conflicting", conflicting}};
}

Json verdict_to_json(const Verdict& v, const Claim& claim, const ConfigEcho& config) {
    Json j;
    j["label"] = to_string(v.label);
    j["mode"] = to_string(v.mode);
    j["claim"] = triple_to_json(claim.triple);
    if (v.probability) j["probability"] = *v.probability;
    j["tied"] = v.tied;
    j["explanation"] = explanation_to_json(v.explanation);
    Json cfg = Json::object();
    for (const auto& [k, value] : config) cfg[k] = value;
    j["config"] = cfg;
    return j;
}

Json eval_result_to_json(const EvalResult& result, Mode mode, const ConfigEcho& config) {
    Json j;
    j["mode"] = to_string(mode);
    j["counts"] = Json{{"correct", result.counts.correct},
                       {"incorrect", result.counts.incorrect},
                       {"undecided", result.counts.undecided},
                       {"total", result.counts.total()}};
    j["metrics"] = Json{{"precision", result.metrics.precision},
                        {"recall", result.metrics.recall},
                        {"f_score", result.metrics.f_score}};
    j["oracle_calls"] = Json{{"distinct_atoms", result.oracle.distinct_atoms},
                             {"accepted", result.oracle.accepted},
                             {"rejected_at_threshold", result.oracle.rejected_at_threshold},
                             {"unanswered", result.oracle.unanswered}};
    Json claims = Json::array();
    for (const auto& r : result.per_claim) {
        Json c;
        c["claim"] = triple_to_json(r.claim.claim.triple);
        c["gold"] = r.claim.gold_true ? "true" : "false";
        c["label"] = to_string(r.verdict.label);
        if (!r.diagnostic.empty()) c["diagnostic"] = r.diagnostic;
        c["explanation"] = explanation_to_json(r.verdict.explanation);
        claims.push_back(std::move(c));
    }
    j["claims"] = claims;
    Json cfg = Json::object();
    for (const auto& [k, value] : config) cfg[k] = value;
    j["config"] = cfg;
    return j;
}

Json ruleset_to_json(const RuleSet& rs) {
    auto arg_to_json = [](const RuleAtom::Arg& a) {
        if (a.is_variable) return Json{{"var", a.var}};
        return Json{{"value", a.term.value}, {"kind", kind_name(a.term.kind)}};
    };
    auto atom_to_json = [&](const RuleAtom& a) {
        Json j;
        if (a.comparison)
            j["op"] = to_string(a.op);
        else
            j["predicate"] = a.predicate;
        j["args"] = Json::array({arg_to_json(a.first), arg_to_json(a.second)});
        return j;
    };

    Json rules = Json::array();
    for (const auto& r : rs.rules) {
        Json body = Json::array();
        for (const auto& a : r.body) body.push_back(atom_to_json(a));
        rules.push_back(Json{{"id", r.id},
                             {"head", atom_to_json(r.head)},
                             {"body", body},
                             {"support", r.support},
                             {"weight", weight_to_json(r.weight)},
                             {"polarity", r.polarity == Polarity::Positive ? "positive" : "negative"}});
    }
    Json constraints = Json::array();
    for (const auto& c : rs.constraints)
        constraints.push_back(
            Json{{"id", c.id},
                 {"kind", c.kind == ConstraintRule::Kind::MutualExclusion ? "mutual-exclusion"
                                                                          : "functionality"},
                 {"predicate", c.predicate},
                 {"weight", weight_to_json(c.weight)},
                 {"synthesized", c.synthesized}});
    Json preds = Json::array();
    for (const auto& p : rs.head_predicates()) preds.push_back(p);
    return Json{{"rules", rules}, {"constraints", constraints}, {"head_predicates", preds}};
}

void render_verdict_text(const Verdict& v, const Claim& claim, std::ostream& out) {
    out << to_string(v.label) << " : " << claim_text(claim) << "\n";
    auto render_entries = [&](const std::vector<ExplanationEntry>& entries) {
        for (const auto& entry : entries) {
            out << "  \xe2\x86\x90  ";
            for (std::size_t i = 0; i < entry.body.size(); ++i) {
                if (i) out << ", ";
                const Triple& t = entry.body[i].triple;
                out << t.predicate << "(" << t.subject.value << ", " << t.object.value << ")";
            }
            out << "   [" << entry.rule_id << "]\n";
        }
    };
    render_entries(v.explanation.supporting);
    if (!v.explanation.conflicting.empty()) {
        out << "conflicting:\n";
        render_entries(v.explanation.conflicting);
    }
    if (v.probability) out << "probability: " << *v.probability << "\n";
    if (v.tied) out << "note: another label reached the same weight; reporting the conservative one\n";
}

void render_eval_table(const EvalResult& result, Mode mode, std::ostream& out) {
    out << "mode: " << to_string(mode) << "\n";
    out << "Correct    " << result.counts.correct << "\n";
    out << "Incorrect  " << result.counts.incorrect << "\n";
    out << "Undecided  " << result.counts.undecided << "\n";
    out << "Precision  " << result.metrics.precision << "\n";
    out << "Recall     " << result.metrics.recall << "\n";
    out << "F-score    " << result.metrics.f_score << "\n";
    out << "oracle calls: " << result.oracle.distinct_atoms << " (accepted "
        << result.oracle.accepted << ", rejected " << result.oracle.rejected_at_threshold
        << ", unanswered " << result.oracle.unanswered << ")\n";
}

}  // namespace factcheck
