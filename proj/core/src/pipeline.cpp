#include "factcheck/pipeline.hpp"

namespace factcheck {

CheckOutcome check_claim(const CheckContext& context, const Claim& claim, Mode mode) {
    if (!context.store || !context.rules) throw Error("check context is missing store or rules");
    const std::string& predicate = claim.triple.predicate;
    if (!context.rules->knows_predicate(predicate)) throw UnknownPredicateError(predicate);

    CheckOutcome outcome;
    std::vector<EvidenceFact> web_facts;
    GroundingDiagnostics diagnostics;

    if (mode == Mode::MapWeb) {
        if (!context.provider) throw Error("mode map+web requires an evidence provider");
        auto requests = collect_missing_atom_requests(claim, *context.rules, *context.store,
                                                      diagnostics, context.grounding);
        web_facts = query_oracle(requests, *context.provider, outcome.oracle);
    }

    outcome.program =
        build_ground_program(claim, *context.rules, *context.store, web_facts, context.grounding);
    outcome.program.diagnostics.merge(diagnostics);

    if (mode == Mode::PureAsp) {
        outcome.verdict = check_pure_asp(outcome.program);
    } else {
        auto [verdict, model] = map_inference(outcome.program, context.inference);
        outcome.verdict = std::move(verdict);
        outcome.verdict.mode = mode;
        if (context.compute_probability)
            outcome.verdict.probability = claim_probability(outcome.program, context.inference);
        (void)model;
    }
    return outcome;
}

}  // namespace factcheck
