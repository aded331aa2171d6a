#ifndef FACTCHECK_TRIPLE_STORE_HPP
#define FACTCHECK_TRIPLE_STORE_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "factcheck/errors.hpp"
#include "factcheck/term.hpp"

namespace factcheck {

struct PredicateStats {
    std::string predicate;
    std::size_t triple_count = 0;
    std::size_t distinct_subject_count = 0;
    double functionality = 0.0;  // distinct subjects / triples, in (0,1]
};

struct TriplePattern {
    std::optional<Term> subject;  // nullopt = variable
    std::string predicate;        // always bound
    std::optional<Term> object;
};

struct LoadReport {
    struct BadRecord {
        std::size_t line;
        std::string reason;
    };
    std::size_t loaded = 0;
    std::size_t duplicates = 0;
    std::vector<BadRecord> bad;

    bool clean() const { return bad.empty(); }
};

struct LoadOptions {
    // DBpedia-style ids are underscore-canonical; off by default so evidence
    // is never silently rewritten.
    bool spaces_to_underscores = false;
};

// In-memory triple set with exact-match and pattern indexes. Reads are
// safe under concurrent access once loading is done; remove_triple needs
// exclusive access and exists for benchmark dataset construction.
class TripleStore {
public:
    bool add(const Triple& t);     // false if already present
    bool remove(const Triple& t);  // false if absent
    bool contains(const Triple& t) const;

    std::size_t size() const { return live_; }
    bool empty() const { return live_ == 0; }

    // Stored triples unifying with the pattern, in canonical order.
    std::vector<Triple> match(const TriplePattern& pattern) const;

    // All predicates connecting the given subject/object pair.
    std::vector<std::string> predicates_between(const Term& subject, const Term& object) const;

    PredicateStats predicate_stats(const std::string& predicate) const;  // UnknownPredicateError
    std::vector<std::string> predicates() const;                         // sorted

    std::vector<Triple> triples() const;  // canonical order

    bool operator==(const TripleStore& other) const;

private:
    std::vector<Triple> data_;
    std::vector<bool> dead_;
    std::size_t live_ = 0;
    std::unordered_map<Triple, std::size_t, TripleHash> ids_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_pred_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_pred_subj_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_pred_obj_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_pair_;

    std::vector<Triple> collect(const std::unordered_map<std::string, std::vector<std::size_t>>& index,
                                const std::string& key, const TriplePattern& pattern) const;
};

enum class StoreFormat { Tsv, NTriples };

TripleStore load_triples(std::istream& in, StoreFormat format, LoadReport& report,
                         const LoadOptions& options = {});
TripleStore load_triples_file(const std::string& path, LoadReport& report,
                              const LoadOptions& options = {});  // format from extension

// TSV serialization in canonical order; load(serialize(s)) == s.
void serialize_tsv(const TripleStore& store, std::ostream& out);

}  // namespace factcheck

#endif
