#ifndef FACTCHECK_EVAL_HPP
#define FACTCHECK_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "factcheck/inference.hpp"
#include "factcheck/pipeline.hpp"
#include "factcheck/term.hpp"
#include "factcheck/triple_store.hpp"

namespace factcheck {

struct LabeledClaim {
    Claim claim;
    bool gold_true = false;
};

struct EvalCounts {
    std::size_t correct = 0;    // T
    std::size_t incorrect = 0;  // F
    std::size_t undecided = 0;  // U

    std::size_t total() const { return correct + incorrect + undecided; }
};

struct EvalMetrics {
    double precision = 0.0;  // T / (T+F), 0 when T+F = 0
    double recall = 0.0;     // T / (T+F+U)
    double f_score = 0.0;    // harmonic mean, 0 when precision+recall = 0
};

EvalMetrics compute_metrics(const EvalCounts& counts);

struct NegativeSample {
    std::vector<std::pair<Term, Term>> pairs;
    bool exhausted = false;  // fewer candidates than requested
};

// Candidate (x,y) pairs for gold-false claims of p. Every pair satisfies:
// p(x,y) is not stored; x or y occurs under p with a different partner;
// some other predicate connects x to y. Deterministic for a fixed seed.
NegativeSample sample_negative_examples(const std::string& predicate, const TripleStore& store,
                                        std::size_t m, std::uint64_t seed);

struct Dataset {
    std::vector<LabeledClaim> claims;
    std::vector<Triple> removed;  // gold-true triples taken out of the store
};

// n_true gold-true claims sampled from the store and removed from it, plus
// n_false negatives. Throws InsufficientCandidatesError when the store
// cannot supply the requested counts.
Dataset build_dataset(const std::string& predicate, TripleStore& store, std::size_t n_true,
                      std::size_t n_false, std::uint64_t seed);

std::vector<LabeledClaim> load_dataset_tsv(std::istream& in, LoadReport& report);
void save_dataset_tsv(const std::vector<LabeledClaim>& claims, std::ostream& out);

struct PerClaimResult {
    LabeledClaim claim;
    Verdict verdict;
    std::string diagnostic;  // set when the claim failed and was counted U
};

struct EvalResult {
    EvalCounts counts;
    EvalMetrics metrics;
    std::vector<PerClaimResult> per_claim;
    OracleQueryReport oracle;
};

// Checks every claim in the given mode; verdicts matching the gold label
// count as T, opposite as F, undecided (or per-claim failure) as U.
// jobs > 1 runs claims on a worker pool; the report order stays fixed.
EvalResult evaluate(const std::vector<LabeledClaim>& claims, Mode mode, const CheckContext& context,
                    std::size_t jobs = 1);

}  // namespace factcheck

#endif
