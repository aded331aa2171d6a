#include "factcheck/grounding.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>
#include <unordered_set>

namespace factcheck {

std::string to_string(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [var, term] : s.bindings) {
        if (!first) out += ", ";
        first = false;
        out += var + " -> " + to_string(term);
    }
    return out + "}";
}

void GroundingDiagnostics::merge(const GroundingDiagnostics& other) {
    truncated = truncated || other.truncated;
    non_numeric_comparisons += other.non_numeric_comparisons;
    discarded_requests += other.discarded_requests;
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

const EvidenceFact* GroundProgram::find_evidence(const Triple& atom) const {
    for (const auto& e : evidence)
        if (e.triple == atom) return &e;
    return nullptr;
}

std::optional<bool> evaluate_comparison(ComparisonOp op, const Term& a, const Term& b) {
    if (a.numeric && b.numeric) {
        double x = *a.numeric;
        double y = *b.numeric;
        switch (op) {
            case ComparisonOp::Greater: return x > y;
            case ComparisonOp::Less: return x < y;
            case ComparisonOp::Equal: return x == y;
            case ComparisonOp::NotEqual: return x != y;
        }
    }
    switch (op) {
        case ComparisonOp::Equal: return a == b;
        case ComparisonOp::NotEqual: return !(a == b);
        default: return std::nullopt;  // ordered comparison without numeric views
    }
}

namespace {

// Store plus accepted oracle facts, queried as one evidence source.
class EvidencePool {
public:
    EvidencePool(const TripleStore& store, std::span<const EvidenceFact> extra) : store_(store) {
        for (const auto& f : extra) extra_.insert(f.triple);
    }

    bool contains(const Triple& t) const { return store_.contains(t) || extra_.count(t) != 0; }

    std::vector<Triple> match(const std::string& predicate, const std::optional<Term>& subject,
                              const std::optional<Term>& object) const {
        std::set<Triple> out;
        for (const Triple& t : store_.match({subject, predicate, object})) out.insert(t);
        for (const Triple& t : extra_) {
            if (t.predicate != predicate) continue;
            if (subject && !(t.subject == *subject)) continue;
            if (object && !(t.object == *object)) continue;
            out.insert(t);
        }
        return {out.begin(), out.end()};
    }

private:
    const TripleStore& store_;
    std::unordered_set<Triple, TripleHash> extra_;
};

using Bindings = std::map<std::string, Term>;

std::optional<Term> resolve(const RuleAtom::Arg& arg, const Bindings& bindings) {
    if (!arg.is_variable) return arg.term;
    auto it = bindings.find(arg.var);
    if (it == bindings.end()) return std::nullopt;
    return it->second;
}

bool fully_bound(const RuleAtom& atom, const Bindings& bindings) {
    return resolve(atom.first, bindings).has_value() && resolve(atom.second, bindings).has_value();
}

Triple instantiate(const RuleAtom& atom, const Bindings& bindings) {
    return Triple{*resolve(atom.first, bindings), atom.predicate, *resolve(atom.second, bindings)};
}

// Backtracking join over the rule body with an optional skipped atom.
// Comparisons are checked as soon as their arguments become bound.
class BodyJoin {
public:
    BodyJoin(const Rule& rule, const EvidencePool& pool, Bindings seed,
             std::optional<std::size_t> skip, GroundingDiagnostics& diags,
             const GroundingOptions& options)
        : rule_(rule), pool_(pool), skip_(skip), diags_(diags), options_(options),
          bindings_(std::move(seed)), matched_(rule.body.size(), false) {}

    // Calls leaf(bindings) for every assignment that matches all
    // non-skipped predicate atoms and passes every bound comparison.
    template <typename Leaf>
    bool run(Leaf&& leaf) {
        for (std::size_t i = 0; i < rule_.body.size(); ++i) {
            const RuleAtom& a = rule_.body[i];
            if (!a.comparison) continue;
            if (fully_bound(a, bindings_) && !check_comparison(a)) return true;
        }
        return descend(leaf);
    }

    bool truncated() const { return truncated_; }

private:
    bool check_comparison(const RuleAtom& a) {
        auto r = evaluate_comparison(a.op, *resolve(a.first, bindings_), *resolve(a.second, bindings_));
        if (!r.has_value()) {
            ++diags_.non_numeric_comparisons;
            return false;
        }
        return *r;
    }

    // Unmatched, unskipped predicate atom with the fewest candidate triples.
    std::optional<std::size_t> pick_atom(std::vector<Triple>& candidates) {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < rule_.body.size(); ++i) {
            if (matched_[i] || rule_.body[i].comparison) continue;
            if (skip_ && *skip_ == i) continue;
            const RuleAtom& a = rule_.body[i];
            auto c = pool_.match(a.predicate, resolve(a.first, bindings_), resolve(a.second, bindings_));
            if (!best || c.size() < candidates.size()) {
                best = i;
                candidates = std::move(c);
                if (candidates.empty()) break;
            }
        }
        return best;
    }

    template <typename Leaf>
    bool descend(Leaf& leaf) {
        if (truncated_) return false;
        std::vector<Triple> candidates;
        auto pick = pick_atom(candidates);
        if (!pick) {
            if (++leaves_ > options_.max_substitutions_per_rule) {
                truncated_ = true;
                return false;
            }
            return leaf(bindings_);
        }
        const RuleAtom& atom = rule_.body[*pick];
        matched_[*pick] = true;
        for (const Triple& t : candidates) {
            std::vector<std::string> bound_here;
            if (!bind(atom.first, t.subject, bound_here) || !bind(atom.second, t.object, bound_here)) {
                unbind(bound_here);
                continue;
            }
            bool ok = true;
            for (const auto& c : rule_.body) {
                if (!c.comparison || !fully_bound(c, bindings_)) continue;
                bool fresh = false;
                for (const auto& v : bound_here)
                    if ((c.first.is_variable && c.first.var == v) ||
                        (c.second.is_variable && c.second.var == v))
                        fresh = true;
                if (fresh && !check_comparison(c)) {
                    ok = false;
                    break;
                }
            }
            if (ok && !descend(leaf)) {
                unbind(bound_here);
                matched_[*pick] = false;
                return false;
            }
            unbind(bound_here);
        }
        matched_[*pick] = false;
        return true;
    }

    bool bind(const RuleAtom::Arg& arg, const Term& value, std::vector<std::string>& bound_here) {
        if (!arg.is_variable) return arg.term == value;
        auto it = bindings_.find(arg.var);
        if (it != bindings_.end()) return it->second == value;
        bindings_.emplace(arg.var, value);
        bound_here.push_back(arg.var);
        return true;
    }

    void unbind(const std::vector<std::string>& vars) {
        for (const auto& v : vars) bindings_.erase(v);
    }

    const Rule& rule_;
    const EvidencePool& pool_;
    std::optional<std::size_t> skip_;
    GroundingDiagnostics& diags_;
    const GroundingOptions& options_;
    Bindings bindings_;
    std::vector<bool> matched_;
    std::size_t leaves_ = 0;
    bool truncated_ = false;
};

Substitution snapshot(const Bindings& b) { return Substitution{b}; }

std::optional<Bindings> head_seed(const Rule& rule, const Claim& claim) {
    Bindings seed;
    seed.emplace(rule.head.first.var, claim.triple.subject);
    auto [it, inserted] = seed.emplace(rule.head.second.var, claim.triple.object);
    if (!inserted && !(it->second == claim.triple.object)) return std::nullopt;
    return seed;
}

}  // namespace

GroundRuleResult ground_rule(const Rule& rule, std::size_t rule_index, const Claim& claim,
                             const TripleStore& store, std::span<const EvidenceFact> extra,
                             GroundingDiagnostics& diagnostics, const GroundingOptions& options) {
    GroundRuleResult result;
    auto seed = head_seed(rule, claim);
    if (!seed) return result;  // head uses one variable twice, claim disagrees
    EvidencePool pool(store, extra);

    Triple head{claim.triple.subject, rule.head.predicate, claim.triple.object};

    // Complete groundings: every body atom backed by evidence.
    {
        BodyJoin join(rule, pool, *seed, std::nullopt, diagnostics, options);
        join.run([&](const Bindings& b) {
            GroundRule g;
            g.rule_id = rule.id;
            g.rule_index = rule_index;
            g.head = head;
            for (const auto& a : rule.body)
                if (!a.comparison) g.body.push_back(instantiate(a, b));
            g.weight = rule.weight;
            g.substitution = snapshot(b);
            result.complete.push_back(std::move(g));
            return true;
        });
        if (join.truncated()) diagnostics.truncated = true;
    }

    // Missing-atom pass: one unskipped join per body atom; the skipped atom
    // must come out fully ground from the matched ones.
    std::set<Triple> seen_requests;
    for (std::size_t k = 0; k < rule.body.size(); ++k) {
        if (rule.body[k].comparison) continue;
        BodyJoin join(rule, pool, *seed, k, diagnostics, options);
        join.run([&](const Bindings& b) {
            if (!fully_bound(rule.body[k], b)) {
                ++diagnostics.discarded_requests;
                return true;
            }
            Triple atom = instantiate(rule.body[k], b);
            if (pool.contains(atom)) return true;  // a complete grounding, not a gap
            if (seen_requests.insert(atom).second)
                result.missing.push_back({rule.id, std::move(atom), snapshot(b)});
            return true;
        });
        if (join.truncated()) diagnostics.truncated = true;
    }

    std::sort(result.complete.begin(), result.complete.end(),
              [](const GroundRule& a, const GroundRule& b) { return a.substitution < b.substitution; });
    std::sort(result.missing.begin(), result.missing.end(),
              [](const MissingAtomRequest& a, const MissingAtomRequest& b) { return a.atom < b.atom; });
    return result;
}

std::vector<MissingAtomRequest> collect_missing_atom_requests(const Claim& claim, const RuleSet& rs,
                                                              const TripleStore& store,
                                                              GroundingDiagnostics& diagnostics,
                                                              const GroundingOptions& options) {
    if (!rs.knows_predicate(claim.triple.predicate))
        throw UnknownPredicateError(claim.triple.predicate);
    std::vector<MissingAtomRequest> merged;
    std::set<Triple> seen;
    for (std::size_t i = 0; i < rs.rules.size(); ++i) {
        const Rule& rule = rs.rules[i];
        if (rule.base_predicate() != claim.triple.predicate) continue;
        auto result = ground_rule(rule, i, claim, store, {}, diagnostics, options);
        for (auto& req : result.missing)
            if (seen.insert(req.atom).second) merged.push_back(std::move(req));
    }
    std::sort(merged.begin(), merged.end(),
              [](const MissingAtomRequest& a, const MissingAtomRequest& b) { return a.atom < b.atom; });
    return merged;
}

GroundProgram build_ground_program(const Claim& claim, const RuleSet& rs, const TripleStore& store,
                                   std::span<const EvidenceFact> accepted_web_facts,
                                   const GroundingOptions& options) {
    const std::string& predicate = claim.triple.predicate;
    if (!rs.knows_predicate(predicate)) throw UnknownPredicateError(predicate);

    GroundProgram gp;
    gp.claim_atom = claim.triple;
    gp.neg_claim_atom = Triple{claim.triple.subject, "neg" + predicate, claim.triple.object};

    for (std::size_t i = 0; i < rs.rules.size(); ++i) {
        const Rule& rule = rs.rules[i];
        if (rule.base_predicate() != predicate) continue;
        auto result = ground_rule(rule, i, claim, store, accepted_web_facts, gp.diagnostics, options);
        for (auto& g : result.complete) gp.rules.push_back(std::move(g));
    }

    std::sort(gp.rules.begin(), gp.rules.end(), [](const GroundRule& a, const GroundRule& b) {
        if (a.rule_index != b.rule_index) return a.rule_index < b.rule_index;
        return a.substitution < b.substitution;
    });
    // Distinct (head, body) instances only: different substitutions can
    // collapse once comparisons are dropped.
    std::set<std::pair<Triple, std::vector<Triple>>> seen;
    std::vector<GroundRule> kept;
    for (auto& g : gp.rules)
        if (seen.emplace(g.head, g.body).second) kept.push_back(std::move(g));
    gp.rules = std::move(kept);

    // Generic constraints for the claim predicate.
    Weight functionality_weight = Weight::soft(0.0);
    std::string me_id = "me:" + predicate;
    std::string fn_id = "fn:" + predicate;
    bool have_fn = false;
    for (const auto& c : rs.constraints_for(predicate)) {
        if (c.kind == ConstraintRule::Kind::MutualExclusion) me_id = c.id;
        if (c.kind == ConstraintRule::Kind::Functionality) {
            functionality_weight = c.weight;
            fn_id = c.id;
            have_fn = true;
        }
    }
    if (!have_fn) {
        try {
            auto synthesized = synthesize_constraints(predicate, store.predicate_stats(predicate));
            functionality_weight = synthesized[1].weight;
        } catch (const UnknownPredicateError&) {
            gp.diagnostics.notes.push_back("no stats for predicate '" + predicate +
                                           "'; functionality weight defaulted to 0");
        }
    }

    gp.constraints.push_back(GroundConstraint{ConstraintRule::Kind::MutualExclusion, me_id,
                                              Weight::alpha(),
                                              {gp.claim_atom, gp.neg_claim_atom}});

    std::vector<Triple> conflicts;
    for (const Triple& t : store.match({claim.triple.subject, predicate, std::nullopt}))
        if (!(t.object == claim.triple.object)) conflicts.push_back(t);
    for (const Triple& conflict : conflicts)
        gp.constraints.push_back(GroundConstraint{ConstraintRule::Kind::Functionality, fn_id,
                                                  functionality_weight,
                                                  {gp.claim_atom, conflict}});

    // Evidence: KG triples referenced by any kept rule body or functionality
    // instance (hard), plus every accepted oracle fact (soft).
    std::set<Triple> kg_used;
    for (const auto& g : gp.rules)
        for (const auto& atom : g.body)
            if (store.contains(atom)) kg_used.insert(atom);
    for (const auto& conflict : conflicts) kg_used.insert(conflict);

    for (const auto& t : kg_used) gp.evidence.push_back(EvidenceFact::kg(t));
    std::vector<EvidenceFact> web(accepted_web_facts.begin(), accepted_web_facts.end());
    std::sort(web.begin(), web.end(),
              [](const EvidenceFact& a, const EvidenceFact& b) { return a.triple < b.triple; });
    for (auto& f : web)
        if (!store.contains(f.triple)) gp.evidence.push_back(std::move(f));

    return gp;
}

namespace {

std::string weight_str(const Weight& w) {
    if (w.hard) return "alpha";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w.value);
    return std::string(buf, ptr);
}

}  // namespace

void serialize_ground_program(const GroundProgram& gp, std::ostream& out) {
    for (const auto& e : gp.evidence)
        out << weight_str(e.weight) << " : " << to_string(e.triple) << ".\n";
    for (const auto& g : gp.rules) {
        out << weight_str(g.weight) << " : " << to_string(g.head) << " :- ";
        for (std::size_t i = 0; i < g.body.size(); ++i) {
            if (i) out << ", ";
            out << to_string(g.body[i]);
        }
        out << ".  % " << g.rule_id << " " << to_string(g.substitution) << "\n";
    }
    for (const auto& c : gp.constraints) {
        out << weight_str(c.weight) << " : :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) out << ", ";
            out << to_string(c.body[i]);
        }
        out << ".  % " << c.id << "\n";
    }
}

}  // namespace factcheck
