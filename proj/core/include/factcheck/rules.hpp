#ifndef FACTCHECK_RULES_HPP
#define FACTCHECK_RULES_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "factcheck/errors.hpp"
#include "factcheck/term.hpp"
#include "factcheck/triple_store.hpp"

namespace factcheck {

// Soft weights are log-odds reals; hard rules use the alpha sentinel and
// are ranked lexicographically above any soft total.
struct Weight {
    double value = 0.0;
    bool hard = false;

    static Weight soft(double v) { return {v, false}; }
    static Weight alpha() { return {0.0, true}; }

    bool operator==(const Weight&) const = default;
};

// w = ln(s / (1 - s)); endpoints map to -inf / +inf sentinels.
double support_to_weight(double support);

enum class ComparisonOp { Greater, Less, NotEqual, Equal };

std::string to_string(ComparisonOp op);

// One body or head atom. Either a binary predicate over (variable | constant)
// arguments or a comparison between two of them.
struct RuleAtom {
    struct Arg {
        bool is_variable = false;
        std::string var;  // when is_variable
        Term term;        // when constant

        static Arg variable(std::string name) { return {true, std::move(name), {}}; }
        static Arg constant(Term t) { return {false, {}, std::move(t)}; }
        bool operator==(const Arg&) const = default;
    };

    bool comparison = false;
    std::string predicate;  // empty for comparisons
    ComparisonOp op = ComparisonOp::Equal;
    Arg first, second;

    static RuleAtom pred(std::string predicate, Arg a, Arg b) {
        return {false, std::move(predicate), ComparisonOp::Equal, std::move(a), std::move(b)};
    }
    static RuleAtom compare(ComparisonOp op, Arg a, Arg b) {
        return {true, {}, op, std::move(a), std::move(b)};
    }
    bool operator==(const RuleAtom&) const = default;
};

enum class Polarity { Positive, Negative };

struct Rule {
    std::string id;  // r<k>, 1-based over the source file
    RuleAtom head;   // predicate p or negp, two variable arguments
    std::vector<RuleAtom> body;
    double support = 0.0;
    Weight weight;
    Polarity polarity = Polarity::Positive;

    // Head predicate without the neg prefix.
    std::string base_predicate() const;
    bool operator==(const Rule&) const = default;
};

struct ConstraintRule {
    enum class Kind { MutualExclusion, Functionality };
    Kind kind = Kind::MutualExclusion;
    std::string predicate;
    Weight weight;        // alpha for mutual exclusion
    std::string id;
    bool synthesized = false;  // true when derived from store stats, not parsed

    bool operator==(const ConstraintRule&) const = default;
};

struct RuleDiagnostic {
    std::size_t line = 0;
    std::size_t column = 0;
    std::string kind;  // ParseError | UnsafeRule | SupportOutOfRange | UnsupportedConstraint
    std::string message;
};

class RuleSet {
public:
    std::vector<Rule> rules;
    std::vector<ConstraintRule> constraints;

    const std::set<std::string>& head_predicates() const { return head_predicates_; }
    bool knows_predicate(const std::string& predicate) const {
        return head_predicates_.count(predicate) != 0;
    }

    // Every rule concluding p or negp; UnknownPredicateError when p is not
    // a head predicate.
    std::vector<Rule> rules_for(const std::string& predicate) const;
    std::vector<ConstraintRule> constraints_for(const std::string& predicate) const;

    void add_rule(Rule rule);
    void add_constraint(ConstraintRule constraint);

    // Fills in missing generic constraints so that every head predicate has
    // both: mutual exclusion (hard) and functionality (from store stats,
    // neutral weight 0 with a diagnostic when the store has no triples).
    void complete_constraints(const TripleStore& store, std::vector<std::string>* notes = nullptr);

private:
    std::set<std::string> head_predicates_;
};

struct RuleParseOptions {
    // Soft rules with support 1 stay soft: clamp to this support instead of
    // emitting the +inf sentinel (reserved for declared-hard rules).
    double clamp_support = 0.9999;
};

struct RuleParseResult {
    RuleSet ruleset;
    std::vector<RuleDiagnostic> diagnostics;

    bool clean() const { return diagnostics.empty(); }
};

RuleParseResult parse_rules(std::istream& in, const RuleParseOptions& options = {});
RuleParseResult parse_rules_text(const std::string& text, const RuleParseOptions& options = {});
RuleParseResult parse_rules_file(const std::string& path, const RuleParseOptions& options = {});

// Parses "p(Subject,Object)" into a claim triple.
Claim parse_claim(const std::string& text);

// Both generic constraints for one predicate: hard mutual exclusion plus
// functionality weighted by ln(f / (1 - f)), clamped like rule supports.
std::vector<ConstraintRule> synthesize_constraints(const std::string& predicate,
                                                   const PredicateStats& stats,
                                                   const RuleParseOptions& options = {});

std::string to_string(const RuleAtom& atom);
std::string to_string(const Rule& rule);              // parseable line form
std::string to_string(const ConstraintRule& constraint);
void pretty_print(const RuleSet& rs, std::ostream& out);

}  // namespace factcheck

#endif
