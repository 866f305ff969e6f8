#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pubpoints/csv.hpp"
#include "pubpoints/util.hpp"

namespace pubpoints {

struct FacultyRecord {
    std::string dblp_name;      // DBLP convention, homonym suffixes included
    std::string affiliation;
    std::string homepage;
    std::string scholar_id;

    bool operator==(const FacultyRecord&) const = default;
};

/// Faculty roster in CSRankings CSV format. Immutable after load.
class Roster {
public:
    /// Header must be `name,affiliation,homepage,scholarid`. Identical duplicate
    /// rows are dropped (counted); the same name under two affiliations is fatal.
    static Roster load(std::istream& in) {
        Roster roster;
        std::vector<std::string> row;
        std::size_t line = 0;
        if (!csv::read_row(in, row, line) || row.size() != 4 || row[0] != "name" ||
            row[1] != "affiliation" || row[2] != "homepage" || row[3] != "scholarid")
            throw config_error("roster: expected header \"name,affiliation,homepage,scholarid\"");
        std::unordered_map<std::string, std::size_t> first_line;
        while (csv::read_row(in, row, line)) {
            if (row.size() == 1 && row[0].empty()) continue;
            if (row.size() != 4)
                throw config_error("roster line " + std::to_string(line) + ": expected 4 fields, got " +
                                   std::to_string(row.size()));
            FacultyRecord rec;
            rec.dblp_name = normalize_whitespace(row[0]);
            rec.affiliation = normalize_whitespace(row[1]);
            rec.homepage = std::string(trim(row[2]));
            rec.scholar_id = std::string(trim(row[3]));
            if (rec.dblp_name.empty())
                throw config_error("roster line " + std::to_string(line) + ": empty name");
            if (rec.affiliation.empty())
                throw config_error("roster line " + std::to_string(line) + ": empty affiliation for \"" +
                                   rec.dblp_name + "\"");
            auto it = roster.by_name_.find(rec.dblp_name);
            if (it != roster.by_name_.end()) {
                const FacultyRecord& prev = roster.records_[it->second];
                if (prev.affiliation != rec.affiliation)
                    throw config_error("roster line " + std::to_string(line) + ": \"" + rec.dblp_name +
                                       "\" already listed at \"" + prev.affiliation + "\" (line " +
                                       std::to_string(first_line[rec.dblp_name]) + "), now at \"" +
                                       rec.affiliation + "\"");
                ++roster.duplicate_rows_dropped_;
                continue;
            }
            first_line.emplace(rec.dblp_name, line);
            roster.by_name_.emplace(rec.dblp_name, roster.records_.size());
            roster.records_.push_back(std::move(rec));
        }
        for (const auto& rec : roster.records_)
            roster.by_school_[rec.affiliation].push_back(rec.dblp_name);
        for (auto& [school, members] : roster.by_school_)
            std::sort(members.begin(), members.end());
        return roster;
    }

    const std::vector<FacultyRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    std::size_t duplicate_rows_dropped() const { return duplicate_rows_dropped_; }

    /// Exact match on the whitespace-normalized DBLP name; no fuzzy matching,
    /// homonym suffixes are significant.
    const FacultyRecord* match_author(std::string_view author_name) const {
        return match_exact(normalize_whitespace(author_name));
    }

    /// Lookup for names already in normalized form (snapshot authors are);
    /// avoids re-normalizing in the per-publication hot path.
    const FacultyRecord* match_exact(const std::string& normalized_name) const {
        auto it = by_name_.find(normalized_name);
        return it == by_name_.end() ? nullptr : &records_[it->second];
    }

    /// School name -> sorted member names. std::map keeps school iteration
    /// order deterministic for reports.
    const std::map<std::string, std::vector<std::string>>& by_school() const { return by_school_; }

    bool has_school(std::string_view school) const {
        return by_school_.find(std::string(school)) != by_school_.end();
    }

private:
    std::vector<FacultyRecord> records_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::map<std::string, std::vector<std::string>> by_school_;
    std::size_t duplicate_rows_dropped_ = 0;
};

inline Roster load_roster(std::istream& in) { return Roster::load(in); }

}  // namespace pubpoints
