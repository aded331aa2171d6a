#include "factcheck/eval.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <thread>

namespace factcheck {

EvalMetrics compute_metrics(const EvalCounts& counts) {
    EvalMetrics m;
    double t = static_cast<double>(counts.correct);
    double decided = static_cast<double>(counts.correct + counts.incorrect);
    double total = static_cast<double>(counts.total());
    m.precision = decided > 0 ? t / decided : 0.0;
    m.recall = total > 0 ? t / total : 0.0;
    m.f_score = (m.precision + m.recall) > 0
                    ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                    : 0.0;
    return m;
}

NegativeSample sample_negative_examples(const std::string& predicate, const TripleStore& store,
                                        std::size_t m, std::uint64_t seed) {
    // Candidates come from the most selective condition first: pairs already
    // connected by some other predicate.
    std::set<std::pair<Term, Term>> co_occurring;
    for (const Triple& t : store.triples()) {
        if (t.predicate == predicate) continue;
        co_occurring.emplace(t.subject, t.object);
    }

    std::vector<std::pair<Term, Term>> candidates;
    for (const auto& [x, y] : co_occurring) {
        if (store.contains(Triple{x, predicate, y})) continue;  // p(x,y) must not hold
        bool partnered = false;
        for (const Triple& t : store.match({x, predicate, std::nullopt}))
            if (!(t.object == y)) {
                partnered = true;
                break;
            }
        if (!partnered)
            for (const Triple& t : store.match({std::nullopt, predicate, y}))
                if (!(t.subject == x)) {
                    partnered = true;
                    break;
                }
        if (!partnered) continue;
        candidates.emplace_back(x, y);
    }

    std::mt19937_64 rng(seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);

    NegativeSample out;
    out.exhausted = candidates.size() < m;
    if (candidates.size() > m) candidates.resize(m);
    out.pairs = std::move(candidates);
    return out;
}

Dataset build_dataset(const std::string& predicate, TripleStore& store, std::size_t n_true,
                      std::size_t n_false, std::uint64_t seed) {
    std::vector<Triple> positives = store.match({std::nullopt, predicate, std::nullopt});
    if (positives.size() < n_true)
        throw InsufficientCandidatesError(
            "predicate '" + predicate + "' has " + std::to_string(positives.size()) +
                " triples, need " + std::to_string(n_true) + " gold-true claims",
            positives.size());

    // Negatives first, against the intact graph.
    NegativeSample negatives = sample_negative_examples(predicate, store, n_false, seed);
    if (negatives.pairs.size() < n_false)
        throw InsufficientCandidatesError(
            "only " + std::to_string(negatives.pairs.size()) +
                " negative candidates exist for '" + predicate + "', need " +
                std::to_string(n_false),
            negatives.pairs.size());

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(positives.begin(), positives.end(), rng);
    positives.resize(n_true);

    Dataset dataset;
    for (const Triple& t : positives) {
        store.remove(t);
        dataset.removed.push_back(t);
        dataset.claims.push_back({Claim{t}, true});
    }
    for (const auto& [x, y] : negatives.pairs)
        dataset.claims.push_back({Claim{Triple{x, predicate, y}}, false});
    return dataset;
}

std::vector<LabeledClaim> load_dataset_tsv(std::istream& in, LoadReport& report) {
    std::vector<LabeledClaim> claims;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
            fields.back().pop_back();
        if (fields.size() != 4 || (fields[3] != "true" && fields[3] != "false")) {
            report.bad.push_back({lineno, "expected subject<TAB>predicate<TAB>object<TAB>true|false"});
            continue;
        }
        LabeledClaim lc;
        lc.claim.triple =
            Triple{Term::entity(fields[0]), fields[1], term_from_token(fields[2])};
        lc.gold_true = fields[3] == "true";
        claims.push_back(std::move(lc));
        ++report.loaded;
    }
    return claims;
}

void save_dataset_tsv(const std::vector<LabeledClaim>& claims, std::ostream& out) {
    for (const auto& lc : claims)
        out << lc.claim.triple.subject.value << '\t' << lc.claim.triple.predicate << '\t'
            << lc.claim.triple.object.value << '\t' << (lc.gold_true ? "true" : "false") << '\n';
}

EvalResult evaluate(const std::vector<LabeledClaim>& claims, Mode mode, const CheckContext& context,
                    std::size_t jobs) {
    EvalResult result;
    result.per_claim.resize(claims.size());
    std::vector<OracleQueryReport> oracle_reports(claims.size());

    auto run_one = [&](std::size_t i) {
        PerClaimResult& r = result.per_claim[i];
        r.claim = claims[i];
        try {
            CheckOutcome outcome = check_claim(context, claims[i].claim, mode);
            r.verdict = std::move(outcome.verdict);
            oracle_reports[i] = std::move(outcome.oracle);
        } catch (const std::exception& e) {
            r.verdict.label = Label::Undecided;
            r.verdict.mode = mode;
            r.diagnostic = e.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < claims.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= claims.size()) break;
                run_one(i);
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& report : oracle_reports) {
        result.oracle.distinct_atoms += report.distinct_atoms;
        result.oracle.accepted += report.accepted;
        result.oracle.rejected_at_threshold += report.rejected_at_threshold;
        result.oracle.unanswered += report.unanswered;
        result.oracle.notes.insert(result.oracle.notes.end(), report.notes.begin(),
                                   report.notes.end());
    }
    for (const auto& r : result.per_claim) {
        if (r.verdict.label == Label::Undecided) {
            ++result.counts.undecided;
        } else if ((r.verdict.label == Label::True) == r.claim.gold_true) {
            ++result.counts.correct;
        } else {
            ++result.counts.incorrect;
        }
    }
    result.metrics = compute_metrics(result.counts);
    return result;
}

}  // namespace factcheck
