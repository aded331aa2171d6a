#include "factcheck/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace factcheck {

double support_to_weight(double support) {
    if (support <= 0.0) return -std::numeric_limits<double>::infinity();
    if (support >= 1.0) return std::numeric_limits<double>::infinity();
    return std::log(support / (1.0 - support));
}

std::string to_string(ComparisonOp op) {
    switch (op) {
        case ComparisonOp::Greater: return ">";
        case ComparisonOp::Less: return "<";
        case ComparisonOp::NotEqual: return "!=";
        case ComparisonOp::Equal: return "=";
    }
    return "?";
}

std::string Rule::base_predicate() const {
    const std::string& p = head.predicate;
    if (polarity == Polarity::Negative && p.rfind("neg", 0) == 0) return p.substr(3);
    return p;
}

namespace {

constexpr const char* kNegPrefix = "neg";

bool is_neg_predicate(const std::string& p) {
    return p.size() > 3 && p.rfind(kNegPrefix, 0) == 0;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// A bare token is a variable iff it is one letter optionally followed by a
// single digit; this accepts both the a,b,c and the A,B,C surface styles.
bool is_variable_token(const std::string& token) {
    if (token.empty() || token.size() > 2) return false;
    if (!std::isalpha(static_cast<unsigned char>(token[0]))) return false;
    if (token.size() == 2 && !std::isdigit(static_cast<unsigned char>(token[1]))) return false;
    return true;
}

class LineParser {
public:
    LineParser(const std::string& line, std::size_t lineno)
        : line_(line), lineno_(lineno) {}

    std::size_t column() const { return pos_ + 1; }

    void skip_ws() {
        while (pos_ < line_.size() &&
               std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }

    bool try_consume(const std::string& s) {
        skip_ws();
        if (line_.compare(pos_, s.size(), s) == 0) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

    void expect(const std::string& s, const std::string& what) {
        if (!try_consume(s)) fail("expected '" + what + "'");
    }

    [[noreturn]] void fail(const std::string& message) {
        throw ParseError(lineno_, column(), message);
    }

    std::optional<ComparisonOp> try_comparison_op() {
        skip_ws();
        if (try_consume("!=") || try_consume("\xe2\x89\xa0")) return ComparisonOp::NotEqual;
        if (try_consume(">")) return ComparisonOp::Greater;
        if (try_consume("<")) return ComparisonOp::Less;
        if (try_consume("=")) return ComparisonOp::Equal;
        return std::nullopt;
    }

    std::string quoted(char quote) {
        ++pos_;  // opening quote
        std::size_t end = line_.find(quote, pos_);
        if (end == std::string::npos) fail("unterminated quote");
        std::string v = line_.substr(pos_, end - pos_);
        pos_ = end + 1;
        return v;
    }

    std::string token() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < line_.size()) {
            char c = line_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                ++pos_;
            } else if (c == '.' && pos_ + 1 < line_.size() &&
                       (std::isalnum(static_cast<unsigned char>(line_[pos_ + 1])) ||
                        line_[pos_ + 1] == '_')) {
                ++pos_;  // interior dot of an identifier, not the rule terminator
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected identifier");
        return line_.substr(start, pos_ - start);
    }

    RuleAtom::Arg arg() {
        skip_ws();
        if (pos_ < line_.size() && (line_[pos_] == '\'' || line_[pos_] == '"')) {
            char q = line_[pos_];
            std::string v = quoted(q);
            if (q == '"') return RuleAtom::Arg::constant(Term::string_lit(v));
            return RuleAtom::Arg::constant(term_from_token(v));
        }
        std::string t = token();
        if (is_variable_token(t)) return RuleAtom::Arg::variable(t);
        return RuleAtom::Arg::constant(term_from_token(t));
    }

    // atom := op '(' arg ',' arg ')' | ident '(' arg ',' arg ')' | arg op arg
    RuleAtom atom() {
        skip_ws();
        std::size_t save = pos_;
        if (auto op = try_comparison_op()) {
            if (try_consume("(")) {
                RuleAtom::Arg a = arg();
                expect(",", ",");
                RuleAtom::Arg b = arg();
                expect(")", ")");
                return RuleAtom::compare(*op, std::move(a), std::move(b));
            }
            pos_ = save;  // bare operator without parens: not a prefix atom
            fail("expected '(' after comparison operator");
        }
        RuleAtom::Arg first = arg();
        if (auto op = try_comparison_op())
            return RuleAtom::compare(*op, std::move(first), this->arg());
        // must be a predicate atom; the arg we read is its name
        if (first.is_variable || first.term.is_entity()) {
            std::string predicate = first.is_variable ? first.var : first.term.value;
            expect("(", "(");
            RuleAtom::Arg a = arg();
            expect(",", ",");
            RuleAtom::Arg b = arg();
            expect(")", ")");
            return RuleAtom::pred(std::move(predicate), std::move(a), std::move(b));
        }
        fail("expected predicate atom or comparison");
    }

private:
    const std::string& line_;
    std::size_t lineno_;
    std::size_t pos_ = 0;
};

struct ParsedLine {
    bool is_constraint = false;
    Rule rule;                    // when !is_constraint
    std::vector<RuleAtom> constraint_body;
    double support = 0.0;
    Weight weight;
};

ParsedLine parse_line(const std::string& line, std::size_t lineno,
                      const RuleParseOptions& options) {
    LineParser p(line, lineno);
    ParsedLine out;

    p.skip_ws();
    bool hard = false;
    if (p.try_consume("alpha") || p.try_consume("\xce\xb1") || p.try_consume("inf")) {
        hard = true;
        out.support = 1.0;
    } else {
        std::string num = p.token();
        try {
            std::size_t used = 0;
            out.support = std::stod(num, &used);
            if (used != num.size()) throw std::invalid_argument(num);
        } catch (const std::exception&) {
            throw ParseError(lineno, 1, "expected rule support or 'alpha' before ':'");
        }
    }
    p.expect(":", ":");

    if (!hard && (out.support < 0.0 || out.support > 1.0))
        throw ParseError(lineno, 1, "SupportOutOfRange: support " + format_double(out.support) +
                                        " outside [0,1]");

    bool bottom_head = p.try_consume("!") || p.try_consume("\xe2\x8a\xa5") || p.try_consume("bot ");
    RuleAtom head;
    if (!bottom_head) head = p.atom();

    if (!(p.try_consume("<-") || p.try_consume("\xe2\x86\x90")))
        p.fail("expected '<-' between head and body");

    std::vector<RuleAtom> body;
    while (true) {
        body.push_back(p.atom());
        if (!p.try_consume(",")) break;
    }
    p.try_consume(".");
    if (!p.at_end()) p.fail("trailing input after rule");
    if (body.empty()) p.fail("rule body must have at least one atom");

    if (hard)
        out.weight = Weight::alpha();
    else if (out.support >= 1.0)
        out.weight = Weight::soft(support_to_weight(options.clamp_support));
    else if (out.support <= 0.0)
        out.weight = Weight::soft(support_to_weight(1.0 - options.clamp_support));
    else
        out.weight = Weight::soft(support_to_weight(out.support));

    if (bottom_head) {
        out.is_constraint = true;
        out.constraint_body = std::move(body);
        return out;
    }

    if (head.comparison) throw ParseError(lineno, 1, "comparison atom cannot be a rule head");
    if (!head.first.is_variable || !head.second.is_variable)
        throw ParseError(lineno, 1, "head arguments must be variables");

    Rule rule;
    rule.head = std::move(head);
    rule.body = std::move(body);
    rule.support = out.support;
    rule.weight = out.weight;
    rule.polarity = is_neg_predicate(rule.head.predicate) ? Polarity::Negative : Polarity::Positive;
    out.rule = std::move(rule);
    return out;
}

// Classifies a parsed bottom-head line as one of the two generic constraint
// shapes; anything else is rejected.
std::optional<ConstraintRule> classify_constraint(const std::vector<RuleAtom>& body,
                                                  double support, Weight weight,
                                                  std::string& error) {
    std::vector<const RuleAtom*> preds;
    std::vector<const RuleAtom*> comparisons;
    for (const auto& a : body)
        (a.comparison ? comparisons : preds).push_back(&a);

    auto same_vars = [](const RuleAtom& a, const RuleAtom& b) {
        return a.first.is_variable && a.second.is_variable && b.first.is_variable &&
               b.second.is_variable && a.first.var == b.first.var && a.second.var == b.second.var;
    };

    if (preds.size() == 2 && comparisons.empty()) {
        const RuleAtom& a = *preds[0];
        const RuleAtom& b = *preds[1];
        const RuleAtom* pos = nullptr;
        const RuleAtom* neg = nullptr;
        if (is_neg_predicate(a.predicate) && a.predicate.substr(3) == b.predicate) {
            neg = &a;
            pos = &b;
        } else if (is_neg_predicate(b.predicate) && b.predicate.substr(3) == a.predicate) {
            neg = &b;
            pos = &a;
        }
        if (pos && neg && same_vars(*pos, *neg)) {
            ConstraintRule c;
            c.kind = ConstraintRule::Kind::MutualExclusion;
            c.predicate = pos->predicate;
            c.weight = Weight::alpha();  // always hard, whatever the line said
            return c;
        }
        error = "constraint with two atoms must be the p/negp mutual exclusion";
        return std::nullopt;
    }

    if (preds.size() == 2 && comparisons.size() == 1) {
        const RuleAtom& a = *preds[0];
        const RuleAtom& b = *preds[1];
        const RuleAtom& cmp = *comparisons[0];
        if (a.predicate == b.predicate && a.first.is_variable && b.first.is_variable &&
            a.first.var == b.first.var && a.second.is_variable && b.second.is_variable &&
            a.second.var != b.second.var && cmp.op == ComparisonOp::NotEqual &&
            cmp.first.is_variable && cmp.second.is_variable) {
            std::set<std::string> cmp_vars{cmp.first.var, cmp.second.var};
            if (cmp_vars == std::set<std::string>{a.second.var, b.second.var}) {
                ConstraintRule c;
                c.kind = ConstraintRule::Kind::Functionality;
                c.predicate = a.predicate;
                c.weight = weight;
                (void)support;
                return c;
            }
        }
        error = "constraint with a comparison must be the functionality shape p(x,y), p(x,z), y != z";
        return std::nullopt;
    }

    error = "unsupported constraint shape";
    return std::nullopt;
}

void check_safety(const Rule& rule, std::size_t lineno, std::vector<RuleDiagnostic>& diags) {
    std::set<std::string> bound;
    for (const auto& a : rule.body) {
        if (a.comparison) continue;
        if (a.first.is_variable) bound.insert(a.first.var);
        if (a.second.is_variable) bound.insert(a.second.var);
    }
    for (const auto* arg : {&rule.head.first, &rule.head.second}) {
        if (!bound.count(arg->var)) {
            diags.push_back({lineno, 1, "UnsafeRule",
                             "head variable '" + arg->var + "' does not occur in the body"});
            return;
        }
    }
    for (const auto& a : rule.body) {
        if (!a.comparison) continue;
        for (const auto* arg : {&a.first, &a.second}) {
            if (arg->is_variable && !bound.count(arg->var)) {
                diags.push_back({lineno, 1, "UnsafeRule",
                                 "comparison variable '" + arg->var +
                                     "' is not bound by any body atom"});
                return;
            }
        }
    }
}

}  // namespace

void RuleSet::add_rule(Rule rule) {
    head_predicates_.insert(rule.base_predicate());
    rules.push_back(std::move(rule));
}

void RuleSet::add_constraint(ConstraintRule constraint) {
    constraints.push_back(std::move(constraint));
}

std::vector<Rule> RuleSet::rules_for(const std::string& predicate) const {
    if (!knows_predicate(predicate)) throw UnknownPredicateError(predicate);
    std::vector<Rule> out;
    for (const auto& r : rules)
        if (r.base_predicate() == predicate) out.push_back(r);
    return out;
}

std::vector<ConstraintRule> RuleSet::constraints_for(const std::string& predicate) const {
    std::vector<ConstraintRule> out;
    for (const auto& c : constraints)
        if (c.predicate == predicate) out.push_back(c);
    return out;
}

void RuleSet::complete_constraints(const TripleStore& store, std::vector<std::string>* notes) {
    for (const auto& predicate : head_predicates_) {
        bool have_me = false;
        bool have_fn = false;
        for (const auto& c : constraints)
            if (c.predicate == predicate) {
                if (c.kind == ConstraintRule::Kind::MutualExclusion) have_me = true;
                if (c.kind == ConstraintRule::Kind::Functionality) have_fn = true;
            }
        if (!have_me) {
            ConstraintRule c;
            c.kind = ConstraintRule::Kind::MutualExclusion;
            c.predicate = predicate;
            c.weight = Weight::alpha();
            c.id = "me:" + predicate;
            c.synthesized = true;
            constraints.push_back(std::move(c));
        }
        if (!have_fn) {
            ConstraintRule c;
            c.kind = ConstraintRule::Kind::Functionality;
            c.predicate = predicate;
            c.id = "fn:" + predicate;
            c.synthesized = true;
            try {
                auto stats = store.predicate_stats(predicate);
                double f = stats.functionality;
                c.weight = Weight::soft(f >= 1.0 ? support_to_weight(RuleParseOptions{}.clamp_support)
                                                 : support_to_weight(f));
            } catch (const UnknownPredicateError&) {
                c.weight = Weight::soft(0.0);
                if (notes)
                    notes->push_back("no stored triples for predicate '" + predicate +
                                     "'; functionality constraint weight defaulted to 0");
            }
            constraints.push_back(std::move(c));
        }
    }
}

RuleParseResult parse_rules(std::istream& in, const RuleParseOptions& options) {
    RuleParseResult result;
    std::string line;
    std::size_t lineno = 0;
    std::size_t rule_index = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        ++rule_index;
        std::string id = "r" + std::to_string(rule_index);
        try {
            ParsedLine parsed = parse_line(line, lineno, options);
            if (parsed.is_constraint) {
                std::string error;
                auto constraint =
                    classify_constraint(parsed.constraint_body, parsed.support, parsed.weight, error);
                if (!constraint) {
                    result.diagnostics.push_back({lineno, 1, "UnsupportedConstraint", error});
                    continue;
                }
                constraint->id = id;
                result.ruleset.add_constraint(std::move(*constraint));
            } else {
                parsed.rule.id = id;
                std::vector<RuleDiagnostic> safety;
                check_safety(parsed.rule, lineno, safety);
                if (!safety.empty()) {
                    result.diagnostics.insert(result.diagnostics.end(), safety.begin(), safety.end());
                    continue;
                }
                result.ruleset.add_rule(std::move(parsed.rule));
            }
        } catch (const ParseError& e) {
            std::string kind = "ParseError";
            std::string message = e.what();
            if (message.find("SupportOutOfRange") != std::string::npos) kind = "SupportOutOfRange";
            result.diagnostics.push_back({e.line(), e.column(), kind, message});
        }
    }
    return result;
}

RuleParseResult parse_rules_text(const std::string& text, const RuleParseOptions& options) {
    std::istringstream in(text);
    return parse_rules(in, options);
}

RuleParseResult parse_rules_file(const std::string& path, const RuleParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_rules(in, options);
}

Claim parse_claim(const std::string& text) {
    LineParser p(text, 1);
    RuleAtom atom = p.atom();
    if (!p.at_end()) p.fail("trailing input after claim");
    if (atom.comparison) throw ParseError(1, 1, "claim must be a predicate atom");
    auto to_term = [](const RuleAtom::Arg& arg) {
        if (arg.is_variable)
            // single-letter claim arguments are entities, not variables
            return Term::entity(arg.var);
        return arg.term;
    };
    Term subject = to_term(atom.first);
    if (!subject.is_entity()) subject = Term::entity(subject.value);
    return Claim{Triple{std::move(subject), atom.predicate, to_term(atom.second)}};
}

std::vector<ConstraintRule> synthesize_constraints(const std::string& predicate,
                                                   const PredicateStats& stats,
                                                   const RuleParseOptions& options) {
    ConstraintRule me;
    me.kind = ConstraintRule::Kind::MutualExclusion;
    me.predicate = predicate;
    me.weight = Weight::alpha();
    me.id = "me:" + predicate;
    me.synthesized = true;

    ConstraintRule fn;
    fn.kind = ConstraintRule::Kind::Functionality;
    fn.predicate = predicate;
    double f = stats.functionality;
    fn.weight = Weight::soft(f >= 1.0 ? support_to_weight(options.clamp_support)
                                      : support_to_weight(f));
    fn.id = "fn:" + predicate;
    fn.synthesized = true;
    return {std::move(me), std::move(fn)};
}

std::string to_string(const RuleAtom& atom) {
    auto arg_str = [](const RuleAtom::Arg& a) {
        if (a.is_variable) return a.var;
        if (a.term.kind == TermKind::StringLit) return "\"" + a.term.value + "\"";
        if (a.term.is_entity() && is_variable_token(a.term.value)) return "'" + a.term.value + "'";
        return a.term.value;
    };
    if (atom.comparison)
        return to_string(atom.op) + "(" + arg_str(atom.first) + "," + arg_str(atom.second) + ")";
    return atom.predicate + "(" + arg_str(atom.first) + "," + arg_str(atom.second) + ")";
}

std::string to_string(const Rule& rule) {
    std::string s = rule.weight.hard ? "alpha" : format_double(rule.support);
    s += ": " + to_string(rule.head) + " <- ";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (i) s += ", ";
        s += to_string(rule.body[i]);
    }
    return s + ".";
}

std::string to_string(const ConstraintRule& c) {
    if (c.kind == ConstraintRule::Kind::MutualExclusion)
        return "alpha: ! <- neg" + c.predicate + "(x,y), " + c.predicate + "(x,y).";
    double f = 1.0 / (1.0 + std::exp(-c.weight.value));  // weight back to support
    return format_double(f) + ": ! <- " + c.predicate + "(x,y), " + c.predicate +
           "(x,z), !=(y,z).";
}

void pretty_print(const RuleSet& rs, std::ostream& out) {
    for (const auto& r : rs.rules) out << to_string(r) << '\n';
    for (const auto& c : rs.constraints) out << to_string(c) << '\n';
}

}  // namespace factcheck
