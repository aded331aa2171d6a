#include "factcheck/term.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace factcheck {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Term Term::number_lit(double n) {
    std::ostringstream os;
    if (n == static_cast<long long>(n) && std::fabs(n) < 1e15)
        os << static_cast<long long>(n);
    else
        os << n;
    return {TermKind::NumberLit, os.str(), n};
}

Term Term::date_lit(std::string v) {
    Term t{TermKind::DateLit, std::move(v), std::nullopt};
    if (auto y = extract_year(t.value)) t.numeric = static_cast<double>(*y);
    return t;
}

std::optional<int> extract_year(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-') {
        negative = true;
        pos = 1;
    }
    std::size_t end = pos;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos || end - pos > 5) return std::nullopt;
    if (end != text.size() && text[end] != '-') return std::nullopt;
    int year = 0;
    std::from_chars(text.data() + pos, text.data() + end, year);
    return negative ? -year : year;
}

Term term_from_token(const std::string& token) {
    if (!token.empty()) {
        double d = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), d);
        if (ec == std::errc() && ptr == token.data() + token.size())
            return Term{TermKind::NumberLit, token, d};

        // YYYY-MM-DD (optionally signed) is the only date form data files use
        std::size_t p = token[0] == '-' ? 1 : 0;
        std::size_t dash = token.find('-', p);
        if (dash != std::string::npos && all_digits(token, p, dash) &&
            dash + 3 <= token.size() && all_digits(token, dash + 1, dash + 3))
            return Term::date_lit(token);
    }
    return Term::entity(token);
}

std::string to_string(const Term& t) {
    if (t.kind == TermKind::StringLit) return "\"" + t.value + "\"";
    return t.value;
}

std::string to_string(const Triple& t) {
    return t.predicate + "(" + to_string(t.subject) + ", " + to_string(t.object) + ")";
}

}  // namespace factcheck
