#include "factcheck/triple_store.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace factcheck {

namespace {

constexpr char kSep = '\x1f';

std::string term_key(const Term& t) {
    std::string k;
    k.reserve(t.value.size() + 1);
    k.push_back(static_cast<char>('0' + static_cast<int>(t.kind)));
    k += t.value;
    return k;
}

std::string ps_key(const std::string& pred, const Term& subj) {
    return pred + kSep + term_key(subj);
}

std::string po_key(const std::string& pred, const Term& obj) {
    return pred + kSep + term_key(obj);
}

std::string pair_key(const Term& subj, const Term& obj) {
    return term_key(subj) + kSep + term_key(obj);
}

void erase_id(std::vector<std::size_t>& v, std::size_t id) {
    v.erase(std::remove(v.begin(), v.end(), id), v.end());
}

}  // namespace

bool TripleStore::add(const Triple& t) {
    if (ids_.count(t)) return false;
    std::size_t id = data_.size();
    data_.push_back(t);
    dead_.push_back(false);
    ids_.emplace(t, id);
    by_pred_[t.predicate].push_back(id);
    by_pred_subj_[ps_key(t.predicate, t.subject)].push_back(id);
    by_pred_obj_[po_key(t.predicate, t.object)].push_back(id);
    by_pair_[pair_key(t.subject, t.object)].push_back(id);
    ++live_;
    return true;
}

bool TripleStore::remove(const Triple& t) {
    auto it = ids_.find(t);
    if (it == ids_.end()) return false;
    std::size_t id = it->second;
    ids_.erase(it);
    dead_[id] = true;
    --live_;
    erase_id(by_pred_[t.predicate], id);
    erase_id(by_pred_subj_[ps_key(t.predicate, t.subject)], id);
    erase_id(by_pred_obj_[po_key(t.predicate, t.object)], id);
    erase_id(by_pair_[pair_key(t.subject, t.object)], id);
    return true;
}

bool TripleStore::contains(const Triple& t) const { return ids_.count(t) != 0; }

std::vector<Triple> TripleStore::collect(
    const std::unordered_map<std::string, std::vector<std::size_t>>& index,
    const std::string& key, const TriplePattern& pattern) const {
    std::vector<Triple> out;
    auto it = index.find(key);
    if (it == index.end()) return out;
    for (std::size_t id : it->second) {
        const Triple& t = data_[id];
        if (pattern.subject && !(t.subject == *pattern.subject)) continue;
        if (pattern.object && !(t.object == *pattern.object)) continue;
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Triple> TripleStore::match(const TriplePattern& pattern) const {
    if (pattern.subject && pattern.object) {
        Triple t{*pattern.subject, pattern.predicate, *pattern.object};
        if (contains(t)) return {t};
        return {};
    }
    if (pattern.subject)
        return collect(by_pred_subj_, ps_key(pattern.predicate, *pattern.subject), pattern);
    if (pattern.object)
        return collect(by_pred_obj_, po_key(pattern.predicate, *pattern.object), pattern);
    return collect(by_pred_, pattern.predicate, pattern);
}

std::vector<std::string> TripleStore::predicates_between(const Term& subject, const Term& object) const {
    std::set<std::string> preds;
    auto it = by_pair_.find(pair_key(subject, object));
    if (it != by_pair_.end())
        for (std::size_t id : it->second) preds.insert(data_[id].predicate);
    return {preds.begin(), preds.end()};
}

PredicateStats TripleStore::predicate_stats(const std::string& predicate) const {
    auto it = by_pred_.find(predicate);
    if (it == by_pred_.end() || it->second.empty()) throw UnknownPredicateError(predicate);
    std::set<std::string> subjects;
    for (std::size_t id : it->second) subjects.insert(term_key(data_[id].subject));
    PredicateStats stats;
    stats.predicate = predicate;
    stats.triple_count = it->second.size();
    stats.distinct_subject_count = subjects.size();
    stats.functionality =
        static_cast<double>(stats.distinct_subject_count) / static_cast<double>(stats.triple_count);
    return stats;
}

std::vector<std::string> TripleStore::predicates() const {
    std::vector<std::string> out;
    for (const auto& [pred, ids] : by_pred_)
        if (!ids.empty()) out.push_back(pred);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Triple> TripleStore::triples() const {
    std::vector<Triple> out;
    out.reserve(live_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!dead_[i]) out.push_back(data_[i]);
    std::sort(out.begin(), out.end());
    return out;
}

bool TripleStore::operator==(const TripleStore& other) const {
    return live_ == other.live_ && triples() == other.triples();
}

namespace {

void normalize_spaces(std::string& s) {
    for (char& c : s)
        if (c == ' ') c = '_';
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_tsv_line(const std::string& line, const LoadOptions& options, Triple& out,
                    std::string& error) {
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
    if (fields.size() != 3) {
        error = "expected 3 tab-separated fields, got " + std::to_string(fields.size());
        return false;
    }
    for (auto& f : fields) {
        f = trim(f);
        if (f.empty()) {
            error = "empty field";
            return false;
        }
        if (options.spaces_to_underscores) normalize_spaces(f);
    }
    Term subject = term_from_token(fields[0]);
    if (!subject.is_entity()) subject = Term::entity(fields[0]);
    Term object;
    if (fields[2].size() >= 2 && fields[2].front() == '"' && fields[2].back() == '"')
        object = Term::string_lit(fields[2].substr(1, fields[2].size() - 2));
    else
        object = term_from_token(fields[2]);
    out = Triple{std::move(subject), fields[1], std::move(object)};
    return true;
}

// <iri> <iri> (<iri> | "literal"(^^<type>)?) .  — blank nodes rejected.
bool parse_ntriples_line(const std::string& line, Triple& out, std::string& error) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    };
    auto parse_iri = [&](std::string& value) {
        if (pos >= line.size() || line[pos] != '<') return false;
        std::size_t end = line.find('>', pos);
        if (end == std::string::npos) return false;
        value = line.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        return true;
    };

    skip_ws();
    if (pos + 1 < line.size() && line[pos] == '_' && line[pos + 1] == ':') {
        error = "blank nodes are not supported";
        return false;
    }
    std::string subject, predicate;
    if (!parse_iri(subject)) {
        error = "expected <subject-iri>";
        return false;
    }
    skip_ws();
    if (!parse_iri(predicate)) {
        error = "expected <predicate-iri>";
        return false;
    }
    skip_ws();
    Term object;
    if (pos < line.size() && line[pos] == '<') {
        std::string iri;
        if (!parse_iri(iri)) {
            error = "expected <object-iri>";
            return false;
        }
        object = Term::entity(iri);
    } else if (pos + 1 < line.size() && line[pos] == '_' && line[pos + 1] == ':') {
        error = "blank nodes are not supported";
        return false;
    } else if (pos < line.size() && line[pos] == '"') {
        std::size_t end = line.find('"', pos + 1);
        if (end == std::string::npos) {
            error = "unterminated literal";
            return false;
        }
        std::string lexical = line.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (pos + 1 < line.size() && line[pos] == '^' && line[pos + 1] == '^') {
            pos += 2;
            std::string type;
            if (!parse_iri(type)) {
                error = "expected datatype iri after ^^";
                return false;
            }
            auto ends_with = [&](const char* suffix) {
                std::string s(suffix);
                return type.size() >= s.size() && type.compare(type.size() - s.size(), s.size(), s) == 0;
            };
            if (ends_with("#integer") || ends_with("#decimal") || ends_with("#double") ||
                ends_with("#float") || ends_with("#int") || ends_with("#long")) {
                try {
                    object = Term::number_lit(lexical, std::stod(lexical));
                } catch (const std::exception&) {
                    error = "non-numeric lexical form for numeric datatype: " + lexical;
                    return false;
                }
            } else if (ends_with("#date") || ends_with("#gYear") || ends_with("#dateTime")) {
                object = Term::date_lit(lexical);
            } else {
                object = Term::string_lit(lexical);
            }
        } else {
            object = Term::string_lit(lexical);
        }
    } else {
        error = "expected object";
        return false;
    }
    skip_ws();
    if (pos >= line.size() || line[pos] != '.') {
        error = "expected terminating '.'";
        return false;
    }
    out = Triple{Term::entity(subject), predicate, std::move(object)};
    return true;
}

}  // namespace

TripleStore load_triples(std::istream& in, StoreFormat format, LoadReport& report,
                         const LoadOptions& options) {
    TripleStore store;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        Triple t;
        std::string error;
        bool ok = format == StoreFormat::Tsv ? parse_tsv_line(line, options, t, error)
                                             : parse_ntriples_line(stripped, t, error);
        if (!ok) {
            report.bad.push_back({lineno, error});
            continue;
        }
        if (store.add(t))
            ++report.loaded;
        else
            ++report.duplicates;
    }
    return store;
}

TripleStore load_triples_file(const std::string& path, LoadReport& report,
                              const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    StoreFormat format = StoreFormat::Tsv;
    if (path.size() >= 3 && path.compare(path.size() - 3, 3, ".nt") == 0)
        format = StoreFormat::NTriples;
    return load_triples(in, format, report, options);
}

void serialize_tsv(const TripleStore& store, std::ostream& out) {
    for (const Triple& t : store.triples()) {
        out << t.subject.value << '\t' << t.predicate << '\t';
        if (t.object.kind == TermKind::StringLit)
            out << '"' << t.object.value << '"';
        else
            out << t.object.value;
        out << '\n';
    }
}

}  // namespace factcheck
