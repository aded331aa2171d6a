#ifndef FACTCHECK_PIPELINE_HPP
#define FACTCHECK_PIPELINE_HPP

#include <optional>
#include <string>

#include "factcheck/evidence.hpp"
#include "factcheck/grounding.hpp"
#include "factcheck/inference.hpp"
#include "factcheck/rules.hpp"
#include "factcheck/triple_store.hpp"

namespace factcheck {

// Everything one claim check needs. The store and rule set are shared
// read-only; the provider (when present) must tolerate concurrent lookups.
struct CheckContext {
    const TripleStore* store = nullptr;
    const RuleSet* rules = nullptr;
    EvidenceProvider* provider = nullptr;  // required for map+web
    GroundingOptions grounding;
    InferenceOptions inference;
    bool compute_probability = false;
};

struct CheckOutcome {
    Verdict verdict;
    GroundProgram program;
    OracleQueryReport oracle;
};

// Full pipeline for one claim: KG grounding, missing-atom oracle round
// (map+web only), program assembly, inference in the requested mode.
CheckOutcome check_claim(const CheckContext& context, const Claim& claim, Mode mode);

}  // namespace factcheck

#endif
