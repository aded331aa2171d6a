#ifndef FACTCHECK_GROUNDING_HPP
#define FACTCHECK_GROUNDING_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factcheck/evidence.hpp"
#include "factcheck/rules.hpp"
#include "factcheck/term.hpp"
#include "factcheck/triple_store.hpp"

namespace factcheck {

struct Substitution {
    std::map<std::string, Term> bindings;  // ordered for deterministic output

    bool operator==(const Substitution&) const = default;
    auto operator<=>(const Substitution&) const = default;
};

std::string to_string(const Substitution& s);

// A fully instantiated rule: comparisons have been evaluated and dropped,
// the body references concrete evidence triples only.
struct GroundRule {
    std::string rule_id;
    std::size_t rule_index = 0;  // position in the rule set, for canonical order
    Triple head;
    std::vector<Triple> body;  // source order, comparisons removed
    Weight weight;
    Substitution substitution;

    bool operator==(const GroundRule&) const = default;
};

// A rule instance where every body atom except one is backed by evidence
// and the leftover atom is fully ground: eligible for an oracle lookup.
struct MissingAtomRequest {
    std::string rule_id;
    Triple atom;
    Substitution partial;

    bool operator==(const MissingAtomRequest&) const = default;
};

struct GroundConstraint {
    ConstraintRule::Kind kind = ConstraintRule::Kind::MutualExclusion;
    std::string id;
    Weight weight;
    std::vector<Triple> body;  // atoms that must not all hold together

    bool operator==(const GroundConstraint&) const = default;
};

struct GroundingDiagnostics {
    bool truncated = false;               // substitution cap hit
    std::size_t non_numeric_comparisons = 0;
    std::size_t discarded_requests = 0;   // unmatched atom still had a variable
    std::vector<std::string> notes;

    void merge(const GroundingDiagnostics& other);
};

struct GroundingOptions {
    std::size_t max_substitutions_per_rule = 10000;
};

struct GroundRuleResult {
    std::vector<GroundRule> complete;
    std::vector<MissingAtomRequest> missing;
};

// Claim-specific program handed to inference: ground rules over evidence
// atoms, the two generic constraints instantiated, and every referenced
// atom present in the evidence collection.
struct GroundProgram {
    Triple claim_atom;
    Triple neg_claim_atom;
    std::vector<GroundRule> rules;
    std::vector<GroundConstraint> constraints;
    std::vector<EvidenceFact> evidence;
    GroundingDiagnostics diagnostics;

    const EvidenceFact* find_evidence(const Triple& atom) const;
};

// Standard comparison semantics; > and < need numeric views (dates reduce
// to their year). Returns nullopt for a non-numeric ordered comparison —
// the caller discards the candidate substitution and counts the event.
std::optional<bool> evaluate_comparison(ComparisonOp op, const Term& a, const Term& b);

// Grounds one rule against the claim: head variables are pinned to the
// claim's subject/object, remaining variables are joined over the store
// plus any extra (oracle) evidence. Complete groundings and single-missing
// -atom requests are disjoint by construction.
GroundRuleResult ground_rule(const Rule& rule, std::size_t rule_index, const Claim& claim,
                             const TripleStore& store, std::span<const EvidenceFact> extra,
                             GroundingDiagnostics& diagnostics, const GroundingOptions& options = {});

// All missing-atom requests for the claim across the rule set, merged so
// each distinct ground atom appears once.
std::vector<MissingAtomRequest> collect_missing_atom_requests(const Claim& claim, const RuleSet& rs,
                                                              const TripleStore& store,
                                                              GroundingDiagnostics& diagnostics,
                                                              const GroundingOptions& options = {});

GroundProgram build_ground_program(const Claim& claim, const RuleSet& rs, const TripleStore& store,
                                   std::span<const EvidenceFact> accepted_web_facts,
                                   const GroundingOptions& options = {});

// Debug serialization, one "w : head :- body." line per element.
void serialize_ground_program(const GroundProgram& gp, std::ostream& out);

}  // namespace factcheck

#endif
