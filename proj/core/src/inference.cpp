#include "factcheck/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace factcheck {

std::string to_string(Label label) {
    switch (label) {
        case Label::True: return "TRUE";
        case Label::False: return "FALSE";
        case Label::Undecided: return "UNDECIDED";
    }
    return "?";
}

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::PureAsp: return "pure-asp";
        case Mode::Map: return "map";
        case Mode::MapWeb: return "map+web";
    }
    return "?";
}

double satisfaction_score(const Weight& w) {
    return std::exp(w.value);
}

Interpretation least_model(std::span<const GroundRule> rules, const std::set<Triple>& facts) {
    Interpretation model{facts};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : rules) {
            if (model.true_atoms.count(rule.head)) continue;
            bool fires = true;
            for (const auto& atom : rule.body)
                if (!model.true_atoms.count(atom)) {
                    fires = false;
                    break;
                }
            if (fires) {
                model.true_atoms.insert(rule.head);
                changed = true;
            }
        }
    }
    return model;
}

namespace {

std::vector<EvidenceFact> tag_body(const GroundRule& rule, const GroundProgram& gp) {
    std::vector<EvidenceFact> out;
    for (const auto& atom : rule.body) {
        if (const EvidenceFact* f = gp.find_evidence(atom))
            out.push_back(*f);
        else
            out.push_back(EvidenceFact::kg(atom));  // claim-atom self reference
    }
    return out;
}

ExplanationEntry entry_for(const GroundRule& rule, const GroundProgram& gp) {
    return ExplanationEntry{rule.rule_id, rule.weight, rule.substitution, tag_body(rule, gp)};
}

bool body_holds(const GroundRule& rule, const std::set<Triple>& atoms) {
    for (const auto& atom : rule.body)
        if (!atoms.count(atom)) return false;
    return true;
}

}  // namespace

Verdict check_pure_asp(const GroundProgram& gp) {
    std::set<Triple> facts;
    for (const auto& e : gp.evidence) facts.insert(e.triple);
    Interpretation model = least_model(gp.rules, facts);

    bool claim_in = model.true_atoms.count(gp.claim_atom) != 0;
    bool neg_in = model.true_atoms.count(gp.neg_claim_atom) != 0;

    bool constraint_violated = false;
    for (const auto& c : gp.constraints) {
        bool all = true;
        for (const auto& atom : c.body)
            if (!model.true_atoms.count(atom)) {
                all = false;
                break;
            }
        if (all) {
            constraint_violated = true;
            break;
        }
    }

    Verdict verdict;
    verdict.mode = Mode::PureAsp;
    if (constraint_violated || (claim_in && neg_in))
        verdict.label = Label::Undecided;
    else if (claim_in)
        verdict.label = Label::True;
    else if (neg_in)
        verdict.label = Label::False;
    else
        verdict.label = Label::Undecided;

    const Triple* verdict_atom = nullptr;
    if (verdict.label == Label::True) verdict_atom = &gp.claim_atom;
    if (verdict.label == Label::False) verdict_atom = &gp.neg_claim_atom;
    for (const auto& rule : gp.rules) {
        if (!body_holds(rule, model.true_atoms)) continue;
        if (verdict_atom && rule.head == *verdict_atom)
            verdict.explanation.supporting.push_back(entry_for(rule, gp));
        else
            verdict.explanation.conflicting.push_back(entry_for(rule, gp));
    }
    if (verdict.label == Label::Undecided) verdict.explanation.supporting.clear();
    return verdict;
}

namespace {

using Mask = std::uint64_t;

struct CompiledFact {
    int atom;  // decision atom id, or -1 when fixed true
    double score;
    bool hard;
};

struct CompiledRule {
    Mask body = 0;  // decision part of the body; fixed-true atoms dropped
    int head = -1;
    double score = 0.0;
    bool hard = false;
    const GroundRule* src = nullptr;
};

struct CompiledConstraint {
    Mask body = 0;
    double score = 0.0;
    bool hard = false;
    const GroundConstraint* src = nullptr;
};

// GroundProgram lowered to bitmask form. Decision atoms: claim (bit 0),
// its negation (bit 1) and the soft (oracle) evidence atoms; KG evidence
// is fixed true per the trusted-KG contract.
struct Compiled {
    std::vector<Triple> decision_atoms;
    std::vector<Triple> fixed_atoms;
    std::vector<CompiledFact> facts;  // on decision atoms only
    std::vector<CompiledRule> rules;
    std::vector<CompiledConstraint> constraints;
    std::vector<Mask> claim_rule_bodies;  // bodies of rules concluding the claim
    std::vector<Mask> neg_rule_bodies;
    std::vector<bool> has_fact;  // per decision atom

    int n() const { return static_cast<int>(decision_atoms.size()); }

    bool stable(Mask m) const {
        if (m & 1) {
            bool justified = false;
            for (Mask body : claim_rule_bodies)
                if ((body & m) == body) {
                    justified = true;
                    break;
                }
            if (!justified && !has_fact[0]) return false;
        }
        if (m & 2) {
            bool justified = false;
            for (Mask body : neg_rule_bodies)
                if ((body & m) == body) {
                    justified = true;
                    break;
                }
            if (!justified && !has_fact[1]) return false;
        }
        // every other decision atom is evidence and self-justified by its fact
        return true;
    }

    std::pair<int, double> evaluate(Mask m) const {
        int violations = 0;
        double score = 0.0;
        for (const auto& f : facts) {
            bool in = (m >> f.atom) & 1;
            if (f.hard)
                violations += in ? 0 : 1;
            else if (in)
                score += f.score;
        }
        for (const auto& r : rules) {
            bool satisfied = ((r.body & m) != r.body) || ((m >> r.head) & 1);
            if (r.hard)
                violations += satisfied ? 0 : 1;
            else if (satisfied)
                score += r.score;
        }
        for (const auto& c : constraints) {
            bool violated = (c.body & m) == c.body;
            if (c.hard)
                violations += violated ? 1 : 0;
            else if (!violated)
                score += c.score;
        }
        return {violations, score};
    }
};

Compiled compile(const GroundProgram& gp, const InferenceOptions& options) {
    Compiled c;
    std::unordered_map<Triple, int, TripleHash> decision_ids;
    auto add_decision = [&](const Triple& t) {
        auto [it, inserted] = decision_ids.emplace(t, static_cast<int>(c.decision_atoms.size()));
        if (inserted) c.decision_atoms.push_back(t);
        return it->second;
    };
    add_decision(gp.claim_atom);
    add_decision(gp.neg_claim_atom);

    std::unordered_map<Triple, bool, TripleHash> fixed;  // kg atoms not equal to claim atoms
    for (const auto& e : gp.evidence) {
        if (e.triple == gp.claim_atom || e.triple == gp.neg_claim_atom) continue;
        if (e.provenance == Provenance::Kg)
            fixed.emplace(e.triple, true);
        else
            add_decision(e.triple);
    }

    std::size_t bound = std::min<std::size_t>(options.search_bound, 62);
    if (c.decision_atoms.size() > bound)
        throw SearchBoundExceededError(c.decision_atoms.size(), bound);

    c.has_fact.assign(c.decision_atoms.size(), false);
    for (const auto& e : gp.evidence) {
        auto it = decision_ids.find(e.triple);
        if (it == decision_ids.end()) {
            c.fixed_atoms.push_back(e.triple);
            continue;  // fixed true, constant contribution
        }
        c.has_fact[it->second] = true;
        c.facts.push_back(CompiledFact{it->second, satisfaction_score(e.weight), e.weight.hard});
    }

    auto body_mask = [&](const std::vector<Triple>& body, const char* what) {
        Mask m = 0;
        for (const auto& atom : body) {
            auto it = decision_ids.find(atom);
            if (it != decision_ids.end()) {
                m |= Mask(1) << it->second;
            } else if (!fixed.count(atom)) {
                throw Error(std::string(what) + " references an atom missing from evidence: " +
                            to_string(atom));
            }
        }
        return m;
    };

    for (const auto& g : gp.rules) {
        CompiledRule r;
        r.body = body_mask(g.body, "ground rule");
        auto it = decision_ids.find(g.head);
        if (it == decision_ids.end()) throw Error("ground rule head is not a claim atom");
        r.head = it->second;
        r.hard = g.weight.hard;
        r.score = r.hard ? 0.0 : satisfaction_score(g.weight);
        r.src = &g;
        if (r.head == 0) c.claim_rule_bodies.push_back(r.body);
        if (r.head == 1) c.neg_rule_bodies.push_back(r.body);
        c.rules.push_back(r);
    }
    for (const auto& gc : gp.constraints) {
        CompiledConstraint cc;
        cc.body = body_mask(gc.body, "constraint");
        cc.hard = gc.weight.hard;
        cc.score = cc.hard ? 0.0 : satisfaction_score(gc.weight);
        cc.src = &gc;
        c.constraints.push_back(cc);
    }
    return c;
}

struct ClassBest {
    bool found = false;
    int violations = std::numeric_limits<int>::max();
    double score = -std::numeric_limits<double>::infinity();
    Mask mask = 0;
};

// Exhaustive scan of one claim/negclaim side class over the evidence
// atoms. Small instances go through here; larger ones use branch and
// bound below.
void scan_class(const Compiled& c, Mask side, ClassBest& best) {
    int n = c.n();
    Mask evidence_bits = n > 2 ? ((Mask(1) << n) - 1) & ~Mask(3) : 0;
    Mask sub = evidence_bits;
    while (true) {
        Mask m = sub | side;
        if (c.stable(m)) {
            auto [violations, score] = c.evaluate(m);
            if (!best.found || violations < best.violations ||
                (violations == best.violations && score > best.score)) {
                best = {true, violations, score, m};
            }
        }
        if (sub == 0) break;
        sub = (sub - 1) & evidence_bits;
    }
}

// Branch and bound over the evidence atoms for one side class. The bound
// is admissible because every soft score is positive: optimistically every
// undetermined element stays satisfiable.
class ClassSearch {
public:
    ClassSearch(const Compiled& c, Mask side) : c_(c), side_(side) {
        for (int i = 2; i < c_.n(); ++i) order_.push_back(i);
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            return atom_score(a) > atom_score(b);
        });
    }

    ClassBest run() {
        assigned_ = Mask(3);
        truth_ = side_;
        descend(0);
        return best_;
    }

private:
    double atom_score(int atom) const {
        for (const auto& f : c_.facts)
            if (f.atom == atom && !f.hard) return f.score;
        return 0.0;
    }

    // (min possible violations, max possible score) for the current partial
    // assignment.
    std::pair<int, double> bound() const {
        Mask def_true = assigned_ & truth_;
        Mask def_false = assigned_ & ~truth_;
        int violations = 0;
        double score = 0.0;
        for (const auto& f : c_.facts) {
            bool possibly_true = !((def_false >> f.atom) & 1);
            if (f.hard)
                violations += possibly_true ? 0 : 1;
            else if (possibly_true)
                score += f.score;
        }
        for (const auto& r : c_.rules) {
            bool body_def_true = (r.body & def_true) == r.body;
            bool head_possibly_true = !((def_false >> r.head) & 1);
            bool possibly_satisfied = !body_def_true || head_possibly_true;
            if (r.hard)
                violations += possibly_satisfied ? 0 : 1;
            else if (possibly_satisfied)
                score += r.score;
        }
        for (const auto& cc : c_.constraints) {
            bool body_def_true = (cc.body & def_true) == cc.body;
            if (cc.hard)
                violations += body_def_true ? 1 : 0;
            else if (!body_def_true)
                score += cc.score;
        }
        return {violations, score};
    }

    void descend(std::size_t depth) {
        auto [min_violations, max_score] = bound();
        if (best_.found) {
            if (min_violations > best_.violations) return;
            if (min_violations == best_.violations && max_score <= best_.score) return;
        }
        if (depth == order_.size()) {
            if (!c_.stable(truth_)) return;
            auto [violations, score] = c_.evaluate(truth_);
            if (!best_.found || violations < best_.violations ||
                (violations == best_.violations && score > best_.score))
                best_ = {true, violations, score, truth_};
            return;
        }
        int atom = order_[depth];
        assigned_ |= Mask(1) << atom;
        truth_ |= Mask(1) << atom;  // include-first keeps DFS deterministic
        descend(depth + 1);
        truth_ &= ~(Mask(1) << atom);
        descend(depth + 1);
        assigned_ &= ~(Mask(1) << atom);
    }

    const Compiled& c_;
    Mask side_;
    std::vector<int> order_;
    Mask assigned_ = 0;
    Mask truth_ = 0;
    ClassBest best_;
};

constexpr std::size_t kExhaustiveLimit = 12;

WeightedModel materialize(const Compiled& c, const GroundProgram& gp, const ClassBest& best) {
    WeightedModel model;
    model.hard_violations = best.violations;
    model.score = best.score;
    for (int i = 0; i < c.n(); ++i)
        if ((best.mask >> i) & 1) model.interpretation.true_atoms.insert(c.decision_atoms[i]);
    for (const auto& t : c.fixed_atoms) model.interpretation.true_atoms.insert(t);
    for (const auto& r : c.rules) {
        bool satisfied = ((r.body & best.mask) != r.body) || ((best.mask >> r.head) & 1);
        if (satisfied) model.satisfied_rule_ids.insert(r.src->rule_id);
    }
    for (const auto& cc : c.constraints) {
        bool violated = (cc.body & best.mask) == cc.body;
        if (!violated) model.satisfied_rule_ids.insert(cc.src->id);
    }
    return model;
}

}  // namespace

std::pair<Verdict, WeightedModel> map_inference(const GroundProgram& gp,
                                                const InferenceOptions& options) {
    Compiled c = compile(gp, options);

    // side classes: neither, negclaim only, claim only, both — in the
    // tie-preference order.
    const Mask sides[4] = {0, 2, 1, 3};
    ClassBest bests[4];
    for (int k = 0; k < 4; ++k) {
        if (static_cast<std::size_t>(c.n()) <= kExhaustiveLimit)
            scan_class(c, sides[k], bests[k]);
        else
            bests[k] = ClassSearch(c, sides[k]).run();
    }

    int winner = -1;
    for (int k = 0; k < 4; ++k) {
        if (!bests[k].found) continue;
        if (winner < 0 || bests[k].violations < bests[winner].violations ||
            (bests[k].violations == bests[winner].violations && bests[k].score > bests[winner].score))
            winner = k;
    }
    if (winner < 0) throw Error("no stable model exists for the ground program");

    bool tied = false;
    for (int k = 0; k < 4; ++k) {
        if (k == winner || !bests[k].found) continue;
        if (bests[k].violations == bests[winner].violations && bests[k].score == bests[winner].score)
            tied = true;
    }

    WeightedModel model = materialize(c, gp, bests[winner]);
    Verdict verdict;
    verdict.mode = Mode::Map;
    verdict.tied = tied;
    Mask side = sides[winner];
    if (side == 1)
        verdict.label = Label::True;
    else if (side == 2)
        verdict.label = Label::False;
    else
        verdict.label = Label::Undecided;  // neither, or both under forced hard violations
    verdict.explanation = extract_explanation(model, gp);
    return {verdict, model};
}

double claim_probability(const GroundProgram& gp, const InferenceOptions& options) {
    Compiled c = compile(gp, options);
    int n = c.n();

    int min_violations = std::numeric_limits<int>::max();
    std::vector<std::pair<double, bool>> weights;  // (log-weight, contains claim)
    for (Mask m = 0; m < (Mask(1) << n); ++m) {
        if (!c.stable(m)) continue;
        auto [violations, score] = c.evaluate(m);
        if (violations < min_violations) {
            min_violations = violations;
            weights.clear();
        }
        if (violations == min_violations) weights.emplace_back(score, (m & 1) != 0);
    }
    if (weights.empty()) return 0.0;

    double max_log = -std::numeric_limits<double>::infinity();
    for (const auto& [logw, in] : weights) max_log = std::max(max_log, logw);
    double total = 0.0;
    double claim_mass = 0.0;
    for (const auto& [logw, in] : weights) {
        double w = std::exp(logw - max_log);
        total += w;
        if (in) claim_mass += w;
    }
    return claim_mass / total;
}

Explanation extract_explanation(const WeightedModel& model, const GroundProgram& gp) {
    Explanation out;
    const auto& atoms = model.interpretation.true_atoms;
    bool claim_in = atoms.count(gp.claim_atom) != 0;
    bool neg_in = atoms.count(gp.neg_claim_atom) != 0;

    const Triple* verdict_atom = nullptr;
    if (claim_in && !neg_in) verdict_atom = &gp.claim_atom;
    if (neg_in && !claim_in) verdict_atom = &gp.neg_claim_atom;

    for (const auto& rule : gp.rules) {
        if (!body_holds(rule, atoms)) continue;
        if (verdict_atom && rule.head == *verdict_atom)
            out.supporting.push_back(entry_for(rule, gp));
        else if (!atoms.count(rule.head))
            out.conflicting.push_back(entry_for(rule, gp));
    }
    return out;
}

}  // namespace factcheck
