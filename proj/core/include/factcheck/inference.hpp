#ifndef FACTCHECK_INFERENCE_HPP
#define FACTCHECK_INFERENCE_HPP

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "factcheck/grounding.hpp"

namespace factcheck {

enum class Label { True, False, Undecided };
enum class Mode { PureAsp, Map, MapWeb };

std::string to_string(Label label);
std::string to_string(Mode mode);

struct Interpretation {
    std::set<Triple> true_atoms;
};

// Satisfaction score of one soft element. Weights are stored as log-odds;
// the comparable satisfaction value is the odds exp(w) > 0, so a fired
// low-support rule still pulls toward its head and conflicting rules are
// arbitrated by relative support. Hard elements never enter the sum: they
// are ranked lexicographically via the violation count.
double satisfaction_score(const Weight& w);

struct WeightedModel {
    Interpretation interpretation;
    std::set<std::string> satisfied_rule_ids;  // ground rules and constraints
    double score = 0.0;                        // sum of satisfied soft scores
    int hard_violations = 0;
};

struct ExplanationEntry {
    std::string rule_id;
    Weight weight;
    Substitution substitution;
    std::vector<EvidenceFact> body;
};

struct Explanation {
    std::vector<ExplanationEntry> supporting;   // conclude the verdict atom
    std::vector<ExplanationEntry> conflicting;  // fired for the opposite atom, left unsatisfied
};

struct Verdict {
    Label label = Label::Undecided;
    Mode mode = Mode::Map;
    std::optional<double> probability;
    Explanation explanation;
    bool tied = false;  // a different label reached the same violations/score
};

struct InferenceOptions {
    std::size_t search_bound = 24;  // max decision atoms for the exact search
};

// Least fixpoint of forward chaining: the minimal model containing the
// facts and closed under the (definite) rules.
Interpretation least_model(std::span<const GroundRule> rules, const std::set<Triple>& facts);

// Weight-free check: all evidence is taken as true and every rule fires.
// Any violated constraint (mutual exclusion, functionality) makes the
// claim undecided; otherwise the label is read off atom membership.
Verdict check_pure_asp(const GroundProgram& gp);

// Exact MAP over the weighted stable models: minimal hard violations
// first, then maximal satisfied soft score. Ties across labels prefer
// undecided, then the negative atom, and are flagged on the verdict.
std::pair<Verdict, WeightedModel> map_inference(const GroundProgram& gp,
                                                const InferenceOptions& options = {});

// Normalized probability that the claim atom is in a stable model, with
// models outside the minimal hard-violation class weighted zero.
double claim_probability(const GroundProgram& gp, const InferenceOptions& options = {});

Explanation extract_explanation(const WeightedModel& model, const GroundProgram& gp);

}  // namespace factcheck

#endif
