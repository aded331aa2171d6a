#ifndef FACTCHECK_TERM_HPP
#define FACTCHECK_TERM_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace factcheck {

enum class TermKind : std::uint8_t {
    Entity = 0,
    StringLit = 1,
    NumberLit = 2,
    DateLit = 3,
};

// One node of a triple: an entity identifier or a literal. Identity is
// (kind, canonical text); the numeric view exists only for number
// literals and for date literals with an extractable year.
struct Term {
    TermKind kind = TermKind::Entity;
    std::string value;
    std::optional<double> numeric;

    static Term entity(std::string v) { return {TermKind::Entity, std::move(v), std::nullopt}; }
    static Term string_lit(std::string v) { return {TermKind::StringLit, std::move(v), std::nullopt}; }
    static Term number_lit(std::string v, double n) { return {TermKind::NumberLit, std::move(v), n}; }
    static Term number_lit(double n);
    static Term date_lit(std::string v);  // year extracted when the form allows

    bool is_entity() const { return kind == TermKind::Entity; }

    bool operator==(const Term& o) const { return kind == o.kind && value == o.value; }
    std::strong_ordering operator<=>(const Term& o) const {
        if (auto c = kind <=> o.kind; c != 0) return c;
        return value <=> o.value;
    }
};

// Parses an unquoted data token into a term: full numbers become number
// literals, ISO-ish dates become date literals, anything else an entity.
Term term_from_token(const std::string& token);

// Year from "YYYY", "YYYY-MM-DD", "-0044-03-15", ... or nullopt.
std::optional<int> extract_year(const std::string& text);

struct Triple {
    Term subject;
    std::string predicate;
    Term object;

    bool operator==(const Triple& o) const = default;
    std::strong_ordering operator<=>(const Triple& o) const {
        if (auto c = predicate <=> o.predicate; c != 0) return c;
        if (auto c = subject <=> o.subject; c != 0) return c;
        return object <=> o.object;
    }
};

// A claim is just a triple whose truth is in question.
struct Claim {
    Triple triple;
};

std::string to_string(const Term& t);
std::string to_string(const Triple& t);  // p(s,o) form

struct TermHash {
    std::size_t operator()(const Term& t) const {
        return std::hash<std::string>()(t.value) * 4u + static_cast<std::size_t>(t.kind);
    }
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        std::size_t h = std::hash<std::string>()(t.predicate);
        h = h * 1000003u ^ TermHash()(t.subject);
        h = h * 1000003u ^ TermHash()(t.object);
        return h;
    }
};

}  // namespace factcheck

#endif
