#ifndef FACTCHECK_EVIDENCE_HPP
#define FACTCHECK_EVIDENCE_HPP

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "factcheck/errors.hpp"
#include "factcheck/rules.hpp"
#include "factcheck/term.hpp"

namespace factcheck {

enum class Provenance { Kg, Oracle };

// A body-grounding triple together with where it came from. KG facts are
// trusted (hard, confidence 1); oracle facts carry the provider confidence
// converted to a log-odds weight and are always strictly above the 0.5
// acceptance threshold.
struct EvidenceFact {
    Triple triple;
    Provenance provenance = Provenance::Kg;
    double confidence = 1.0;
    Weight weight = Weight::alpha();

    static EvidenceFact kg(Triple t) { return {std::move(t), Provenance::Kg, 1.0, Weight::alpha()}; }
    static EvidenceFact oracle(Triple t, double confidence);

    bool operator==(const EvidenceFact&) const = default;
};

struct OracleResponse {
    Triple triple;
    double probability = 0.0;  // in [0,1]
    std::string note;
};

// The (ground triple -> probability) contract that replaces the paper-scale
// web text-mining stack. Implementations must tolerate concurrent lookups.
class EvidenceProvider {
public:
    virtual ~EvidenceProvider() = default;
    // nullopt when the provider has no answer (absence, timeout, failure).
    virtual std::optional<OracleResponse> lookup(const Triple& atom) = 0;
    virtual std::string describe() const = 0;
};

// Exact-match oracle backed by a TSV fixture:
// subject<TAB>predicate<TAB>object<TAB>probability
class FileStubProvider : public EvidenceProvider {
public:
    static FileStubProvider load(std::istream& in);         // FixtureParseError
    static FileStubProvider load_file(const std::string& path);

    std::optional<OracleResponse> lookup(const Triple& atom) override;
    std::string describe() const override { return "file-stub(" + std::to_string(table_.size()) + " entries)"; }
    std::size_t size() const { return table_.size(); }

private:
    std::unordered_map<Triple, double, TripleHash> table_;
};

struct HttpProviderStats {
    std::size_t requests = 0;
    std::size_t timeouts = 0;
    std::size_t transport_failures = 0;
    std::size_t malformed_responses = 0;
};

// Generic client for an external oracle endpoint. One POST per atom:
//   request  {"subject": ..., "predicate": ..., "object": ...}
//   response {"probability": number in [0,1], "note"?: string}
// Failures of any kind degrade to "no answer" and are counted.
class HttpProvider : public EvidenceProvider {
public:
    HttpProvider(std::string url, double timeout_seconds = 5.0);
    ~HttpProvider() override;

    std::optional<OracleResponse> lookup(const Triple& atom) override;
    std::string describe() const override { return "http(" + url_ + ")"; }
    HttpProviderStats stats() const;

private:
    struct Impl;
    std::string url_;
    std::unique_ptr<Impl> impl_;
    mutable std::mutex stats_mutex_;
    HttpProviderStats stats_;
};

// Per-run response cache with in-flight deduplication: concurrent lookups
// of the same atom reach the backend once.
class CachingProvider : public EvidenceProvider {
public:
    explicit CachingProvider(EvidenceProvider& inner) : inner_(inner) {}

    std::optional<OracleResponse> lookup(const Triple& atom) override;
    std::string describe() const override { return inner_.describe(); }
    std::size_t backend_calls() const;

private:
    struct Entry;
    EvidenceProvider& inner_;
    mutable std::mutex mutex_;
    std::unordered_map<Triple, std::shared_ptr<Entry>, TripleHash> cache_;
    std::size_t backend_calls_ = 0;
};

struct OracleQueryReport {
    std::size_t distinct_atoms = 0;
    std::size_t accepted = 0;
    std::size_t rejected_at_threshold = 0;  // probability <= 0.5
    std::size_t unanswered = 0;             // absent / provider failure
    std::vector<std::string> notes;
};

struct MissingAtomRequest;  // grounding.hpp

// One provider call per distinct requested atom; answers with probability
// strictly above 0.5 become soft evidence, everything else is logged and
// dropped. Provider trouble is never fatal: lack of evidence simply leaves
// the claim undecidable downstream.
std::vector<EvidenceFact> query_oracle(std::span<const MissingAtomRequest> requests,
                                       EvidenceProvider& provider, OracleQueryReport& report);

}  // namespace factcheck

#endif
