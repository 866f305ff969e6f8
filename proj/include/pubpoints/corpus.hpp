#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "pubpoints/dblp_xml.hpp"
#include "pubpoints/registry.hpp"
#include "pubpoints/util.hpp"

namespace pubpoints {

/// Inclusive year window, e.g. {2019, 2023}.
struct Window {
    int start_year = 0;
    int end_year = 0;

    bool contains(int year) const { return year >= start_year && year <= end_year; }
    bool operator==(const Window&) const = default;

    /// Parses "YYYY-YYYY".
    static Window parse(std::string_view s) {
        auto dash = s.find('-');
        auto year = [&](std::string_view t) -> int {
            if (t.size() != 4 || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
                throw config_error("window must be YYYY-YYYY, got \"" + std::string(s) + "\"");
            return (t[0] - '0') * 1000 + (t[1] - '0') * 100 + (t[2] - '0') * 10 + (t[3] - '0');
        };
        if (dash == std::string_view::npos)
            throw config_error("window must be YYYY-YYYY, got \"" + std::string(s) + "\"");
        Window w{year(s.substr(0, dash)), year(s.substr(dash + 1))};
        if (w.start_year > w.end_year)
            throw config_error("window start exceeds end in \"" + std::string(s) + "\"");
        return w;
    }
};

struct Publication {
    std::string key;
    std::string conference;
    std::string area;
    int year = 0;
    std::vector<std::string> authors;   // DBLP order, homonym suffixes preserved
    std::string title;

    bool operator==(const Publication&) const = default;
};

struct IngestStats {
    std::uint64_t records_scanned = 0;
    std::uint64_t records_matched = 0;
    std::uint64_t records_skipped = 0;

    bool operator==(const IngestStats&) const = default;
};

/// The persisted extract of matched publications, sorted by key.
/// `stats` are per-ingest diagnostics; they are not written to snapshot files
/// and equality is over publication content.
struct CorpusSnapshot {
    std::vector<Publication> publications;
    IngestStats stats;

    bool operator==(const CorpusSnapshot& o) const { return publications == o.publications; }
};

inline constexpr std::string_view kSnapshotHeader = "pubpoints-snapshot v1";

namespace detail {

class DblpRecordHandler {
public:
    explicit DblpRecordHandler(const Registry& registry) : registry_(registry) {}

    void start_element(std::string_view name, const std::vector<xml::Attr>& attrs) {
        ++depth_;
        if (depth_ == 2) {
            if (!is_record_kind(name)) return;
            ++stats_.records_scanned;
            in_record_ = true;
            candidate_ = (name == "inproceedings" || name == "article");
            key_.clear();
            authors_.clear();
            title_.clear();
            year_text_.clear();
            number_.clear();
            for (const auto& a : attrs)
                if (a.name == "key") key_ = a.value;
        } else if (depth_ == 3 && in_record_ && candidate_) {
            if (name == "author") field_ = Field::author;
            else if (name == "title") field_ = Field::title;
            else if (name == "year") field_ = Field::year;
            else if (name == "number") field_ = Field::number;
            else field_ = Field::none;
            field_text_.clear();
        }
        // Deeper elements (formatting tags inside titles) keep the current
        // field active so their text is collected.
    }

    void text(std::string_view chunk) {
        if (depth_ >= 3 && field_ != Field::none) {
            if (field_text_.size() + chunk.size() > kFieldCap)
                throw data_error("record field exceeds " + std::to_string(kFieldCap) + " bytes in \"" + key_ + "\"");
            field_text_.append(chunk);
        }
    }

    void end_element(std::string_view) {
        if (depth_ == 3 && in_record_ && candidate_ && field_ != Field::none) {
            commit_field();
            field_ = Field::none;
        } else if (depth_ == 2 && in_record_) {
            finish_record();
            in_record_ = false;
        }
        --depth_;
    }

    CorpusSnapshot take_snapshot() {
        CorpusSnapshot snap;
        snap.publications = std::move(publications_);
        std::sort(snap.publications.begin(), snap.publications.end(),
                  [](const Publication& a, const Publication& b) { return a.key < b.key; });
        stats_.records_matched = snap.publications.size();
        stats_.records_skipped = stats_.records_scanned - stats_.records_matched;
        snap.stats = stats_;
        return snap;
    }

private:
    enum class Field { none, author, title, year, number };

    static bool is_record_kind(std::string_view name) {
        return name == "inproceedings" || name == "article" || name == "proceedings" ||
               name == "book" || name == "incollection" || name == "phdthesis" ||
               name == "mastersthesis" || name == "www" || name == "person" || name == "data";
    }

    void commit_field() {
        switch (field_) {
            case Field::author: {
                std::string name = normalize_whitespace(field_text_);
                if (!name.empty()) authors_.push_back(std::move(name));
                break;
            }
            case Field::title:
                title_ = std::string(trim(field_text_));
                break;
            case Field::year:
                year_text_ = std::string(trim(field_text_));
                break;
            case Field::number:
                number_ = std::string(trim(field_text_));
                break;
            case Field::none:
                break;
        }
    }

    void finish_record() {
        if (!candidate_ || key_.empty() || authors_.empty()) return;
        std::optional<int> year = parse_year(year_text_);
        if (!year) return;
        auto match = registry_.resolve(key_, *year, number_);
        if (!match) return;
        if (!seen_keys_.insert(key_).second) return;  // duplicate key: first wins
        publications_.push_back(Publication{key_, match->conference->name, match->area->abbrev,
                                            *year, std::move(authors_), std::move(title_)});
    }

    static std::optional<int> parse_year(std::string_view s) {
        if (s.empty() || s.size() > 4) return std::nullopt;
        int y = 0;
        for (char c : s) {
            if (c < '0' || c > '9') return std::nullopt;
            y = y * 10 + (c - '0');
        }
        if (y <= 1900) return std::nullopt;
        return y;
    }

    static constexpr std::size_t kFieldCap = 8 * 1024 * 1024;

    const Registry& registry_;
    int depth_ = 0;
    bool in_record_ = false;
    bool candidate_ = false;
    Field field_ = Field::none;
    std::string key_, field_text_, title_, year_text_, number_;
    std::vector<std::string> authors_;
    std::vector<Publication> publications_;
    std::unordered_set<std::string> seen_keys_;   // matched keys only, so memory tracks the matched set
    IngestStats stats_;
};

}  // namespace detail

/// Streams a DBLP XML dump once and keeps the records that resolve to a
/// registry conference. Records missing a year or authors are skipped and
/// counted; malformed XML and unknown entities are fatal.
inline CorpusSnapshot ingest_dblp(std::istream& in, const Registry& registry) {
    detail::DblpRecordHandler handler(registry);
    xml::parse(in, handler);
    return handler.take_snapshot();
}

/// Writes the line-delimited snapshot format; returns bytes written.
/// Output is byte-deterministic: records are sorted by key and serialized
/// with a fixed field order.
inline std::uint64_t write_snapshot(const CorpusSnapshot& snapshot, std::ostream& out) {
    std::vector<const Publication*> sorted;
    sorted.reserve(snapshot.publications.size());
    for (const auto& p : snapshot.publications) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const Publication* a, const Publication* b) { return a->key < b->key; });

    std::string payload;
    payload.append(kSnapshotHeader);
    payload.push_back('\n');
    for (const Publication* p : sorted) {
        nlohmann::ordered_json j;
        j["key"] = p->key;
        j["conference"] = p->conference;
        j["area"] = p->area;
        j["year"] = p->year;
        j["authors"] = p->authors;
        j["title"] = p->title;
        payload.append(j.dump());
        payload.push_back('\n');
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw data_error("snapshot write failed");
    return payload.size();
}

inline CorpusSnapshot read_snapshot(std::istream& in) {
    CorpusSnapshot snap;
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kSnapshotHeader)
        throw data_error("snapshot line 1: version mismatch (expected \"" + std::string(kSnapshotHeader) +
                         "\", got \"" + line + "\")");
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("key") || !j.contains("conference") ||
            !j.contains("area") || !j.contains("year") || !j.contains("authors") || !j.contains("title") ||
            !j["key"].is_string() || !j["year"].is_number_integer() || !j["authors"].is_array())
            throw data_error("snapshot line " + std::to_string(line_no) + ": truncated or malformed record");
        Publication p;
        p.key = j["key"].get<std::string>();
        p.conference = j["conference"].get<std::string>();
        p.area = j["area"].get<std::string>();
        p.year = j["year"].get<int>();
        for (const auto& a : j["authors"]) {
            if (!a.is_string())
                throw data_error("snapshot line " + std::to_string(line_no) + ": truncated or malformed record");
            p.authors.push_back(a.get<std::string>());
        }
        p.title = j["title"].get<std::string>();
        if (p.authors.empty())
            throw data_error("snapshot line " + std::to_string(line_no) + ": record has no authors");
        if (!snap.publications.empty() && !(snap.publications.back().key < p.key))
            throw data_error("snapshot line " + std::to_string(line_no) + ": records out of order or duplicated");
        snap.publications.push_back(std::move(p));
    }
    snap.stats.records_scanned = snap.publications.size();
    snap.stats.records_matched = snap.publications.size();
    snap.stats.records_skipped = 0;
    return snap;
}

}  // namespace pubpoints
