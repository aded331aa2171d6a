#include "factcheck/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "factcheck/grounding.hpp"

#include <httplib.h>
#include <json.hpp>

namespace factcheck {

namespace {

// Only KG facts are hard; a fully confident oracle answer stays soft.
constexpr double kMaxOracleConfidence = 0.9999;

}  // namespace

EvidenceFact EvidenceFact::oracle(Triple t, double confidence) {
    if (confidence >= 1.0) confidence = kMaxOracleConfidence;
    return {std::move(t), Provenance::Oracle, confidence,
            Weight::soft(std::log(confidence / (1.0 - confidence)))};
}

FileStubProvider FileStubProvider::load(std::istream& in) {
    FileStubProvider provider;
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
        if (fields.size() != 4)
            throw FixtureParseError("oracle fixture line " + std::to_string(lineno) +
                                    ": expected 4 tab-separated fields");
        for (auto& f : fields) {
            std::size_t b = f.find_first_not_of(" \t\r");
            std::size_t e = f.find_last_not_of(" \t\r");
            f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
        }
        double probability = 0.0;
        try {
            std::size_t used = 0;
            probability = std::stod(fields[3], &used);
            if (used != fields[3].size()) throw std::invalid_argument(fields[3]);
        } catch (const std::exception&) {
            throw FixtureParseError("oracle fixture line " + std::to_string(lineno) +
                                    ": bad probability '" + fields[3] + "'");
        }
        if (probability < 0.0 || probability > 1.0)
            throw FixtureParseError("oracle fixture line " + std::to_string(lineno) +
                                    ": probability outside [0,1]");
        Triple t{Term::entity(fields[0]), fields[1], term_from_token(fields[2])};
        if (!provider.table_.emplace(t, probability).second)
            throw FixtureParseError("oracle fixture line " + std::to_string(lineno) +
                                    ": duplicate entry for " + to_string(t));
    }
    return provider;
}

FileStubProvider FileStubProvider::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FixtureParseError("cannot open oracle fixture " + path);
    return load(in);
}

std::optional<OracleResponse> FileStubProvider::lookup(const Triple& atom) {
    auto it = table_.find(atom);
    if (it == table_.end()) return std::nullopt;
    return OracleResponse{atom, it->second, "fixture"};
}

struct HttpProvider::Impl {
    httplib::Client client;
    std::string path;

    Impl(const std::string& base, std::string path_part, double timeout_seconds)
        : client(base), path(std::move(path_part)) {
        auto seconds = static_cast<time_t>(timeout_seconds);
        auto micros = static_cast<time_t>((timeout_seconds - static_cast<double>(seconds)) * 1e6);
        client.set_connection_timeout(seconds, micros);
        client.set_read_timeout(seconds, micros);
        client.set_write_timeout(seconds, micros);
    }
};

HttpProvider::HttpProvider(std::string url, double timeout_seconds) : url_(std::move(url)) {
    std::string base = url_;
    std::string path = "/";
    std::size_t scheme = url_.find("://");
    std::size_t slash = scheme == std::string::npos ? url_.find('/') : url_.find('/', scheme + 3);
    if (slash != std::string::npos) {
        base = url_.substr(0, slash);
        path = url_.substr(slash);
    }
    impl_ = std::make_unique<Impl>(base, path, timeout_seconds);
}

HttpProvider::~HttpProvider() = default;

HttpProviderStats HttpProvider::stats() const {
    std::lock_guard lock(stats_mutex_);
    return stats_;
}

std::optional<OracleResponse> HttpProvider::lookup(const Triple& atom) {
    nlohmann::json request = {
        {"subject", atom.subject.value},
        {"predicate", atom.predicate},
        {"object", atom.object.value},
    };
    {
        std::lock_guard lock(stats_mutex_);
        ++stats_.requests;
    }
    auto result = impl_->client.Post(impl_->path, request.dump(), "application/json");
    if (!result) {
        std::lock_guard lock(stats_mutex_);
        if (result.error() == httplib::Error::ConnectionTimeout ||
            result.error() == httplib::Error::Read || result.error() == httplib::Error::Write)
            ++stats_.timeouts;
        else
            ++stats_.transport_failures;
        return std::nullopt;
    }
    if (result->status != 200) {
        std::lock_guard lock(stats_mutex_);
        ++stats_.transport_failures;
        return std::nullopt;
    }
    try {
        nlohmann::json body = nlohmann::json::parse(result->body);
        double probability = body.at("probability").get<double>();
        if (probability < 0.0 || probability > 1.0) throw std::out_of_range("probability");
        OracleResponse response{atom, probability, {}};
        if (body.contains("note")) response.note = body["note"].get<std::string>();
        return response;
    } catch (const std::exception&) {
        std::lock_guard lock(stats_mutex_);
        ++stats_.malformed_responses;
        return std::nullopt;
    }
}

struct CachingProvider::Entry {
    std::mutex m;
    std::condition_variable cv;
    bool ready = false;
    std::optional<OracleResponse> response;
};

std::optional<OracleResponse> CachingProvider::lookup(const Triple& atom) {
    std::shared_ptr<Entry> entry;
    bool owner = false;
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(atom);
        if (it == cache_.end()) {
            entry = std::make_shared<Entry>();
            cache_.emplace(atom, entry);
            owner = true;
            ++backend_calls_;
        } else {
            entry = it->second;
        }
    }
    if (owner) {
        auto response = inner_.lookup(atom);
        std::lock_guard lock(entry->m);
        entry->response = std::move(response);
        entry->ready = true;
        entry->cv.notify_all();
        return entry->response;
    }
    std::unique_lock lock(entry->m);
    entry->cv.wait(lock, [&] { return entry->ready; });
    return entry->response;
}

std::size_t CachingProvider::backend_calls() const {
    std::lock_guard lock(mutex_);
    return backend_calls_;
}

std::vector<EvidenceFact> query_oracle(std::span<const MissingAtomRequest> requests,
                                       EvidenceProvider& provider, OracleQueryReport& report) {
    std::vector<EvidenceFact> facts;
    std::set<Triple> seen;
    for (const auto& request : requests) {
        if (!seen.insert(request.atom).second) continue;
        ++report.distinct_atoms;
        std::optional<OracleResponse> response;
        try {
            response = provider.lookup(request.atom);
        } catch (const std::exception& e) {
            ++report.unanswered;
            report.notes.push_back("provider failure for " + to_string(request.atom) + ": " + e.what());
            continue;
        }
        if (!response) {
            ++report.unanswered;
            report.notes.push_back("no answer for " + to_string(request.atom));
            continue;
        }
        if (response->probability <= 0.5) {
            ++report.rejected_at_threshold;
            continue;
        }
        ++report.accepted;
        facts.push_back(EvidenceFact::oracle(request.atom, response->probability));
    }
    std::sort(facts.begin(), facts.end(),
              [](const EvidenceFact& a, const EvidenceFact& b) { return a.triple < b.triple; });
    return facts;
}

}  // namespace factcheck
