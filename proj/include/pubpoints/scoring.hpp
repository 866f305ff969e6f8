#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pubpoints/corpus.hpp"
#include "pubpoints/effort.hpp"
#include "pubpoints/registry.hpp"
#include "pubpoints/roster.hpp"
#include "pubpoints/util.hpp"

namespace pubpoints {

/// Score card for a person or a school. For schools the headline is
/// `adjusted_total` and `area_breakdown` holds adjusted points; for people
/// the breakdown holds full points and sums to `total`.
struct ScoreRecord {
    std::string entity;
    double total = 0;
    double adjusted_total = 0;
    double per_year = 0;
    double adjusted_per_year = 0;
    std::optional<int> first_year;
    std::map<std::string, double> area_breakdown;
    std::map<std::string, double> adjusted_area_breakdown;
    int num_areas = 0;
};

inline double pub_points(const Publication& pub, const PointsTable& table) {
    auto it = table.points.find(pub.area);
    if (it == table.points.end())
        throw data_error("publication \"" + pub.key + "\": points undefined for area \"" + pub.area + "\"");
    return it->second;
}

inline double pub_adjusted(const Publication& pub, const PointsTable& table) {
    return pub_points(pub, table) / static_cast<double>(pub.authors.size());
}

namespace detail {

inline bool lists_author(const Publication& pub, const std::string& name) {
    for (const std::string& a : pub.authors)
        if (a == name) return true;
    return false;
}

inline int per_year_divisor(int analysis_year, int first_year) {
    return std::max(1, analysis_year - first_year + 1);
}

}  // namespace detail

/// total divided by the years since the first publication, both ends inclusive.
inline double per_year_average(double total, int first_year, int analysis_year) {
    return total / detail::per_year_divisor(analysis_year, first_year);
}

/// Sums a person's in-window publication points. `first_year` is the year of
/// their earliest publication anywhere in the snapshot, not just the window;
/// per-year averages divide by (analysis_year - first_year + 1).
inline ScoreRecord person_score(std::string_view name, const CorpusSnapshot& snapshot,
                                const PointsTable& table, Window window, int analysis_year) {
    ScoreRecord rec;
    rec.entity = normalize_whitespace(name);
    for (const Publication& p : snapshot.publications) {
        if (!detail::lists_author(p, rec.entity)) continue;
        if (!rec.first_year || p.year < *rec.first_year) rec.first_year = p.year;
        if (!window.contains(p.year)) continue;
        double pts = pub_points(p, table);
        double adjusted = pts / static_cast<double>(p.authors.size());
        rec.total += pts;
        rec.adjusted_total += adjusted;
        rec.area_breakdown[p.area] += pts;
        rec.adjusted_area_breakdown[p.area] += adjusted;
    }
    rec.num_areas = static_cast<int>(rec.area_breakdown.size());
    if (rec.first_year && rec.total > 0) {
        int divisor = detail::per_year_divisor(analysis_year, *rec.first_year);
        rec.per_year = rec.total / divisor;
        rec.adjusted_per_year = rec.adjusted_total / divisor;
    }
    return rec;
}

/// Points over first-authored in-window publications. In areas whose parent is
/// Theory the author list is alphabetical, so every listed author gets
/// first-author credit regardless of position.
inline double first_author_points(std::string_view name, const CorpusSnapshot& snapshot,
                                  const PointsTable& table, Window window, const Registry& registry) {
    std::string wanted = normalize_whitespace(name);
    double total = 0;
    for (const Publication& p : snapshot.publications) {
        if (!window.contains(p.year)) continue;
        bool counts = false;
        const Area* area = registry.find_area(p.area);
        if (area && area->parent == ParentArea::Theory)
            counts = detail::lists_author(p, wanted);
        else
            counts = !p.authors.empty() && p.authors.front() == wanted;
        if (counts) total += pub_points(p, table);
    }
    return total;
}

/// School score: members' adjusted points summed, with credit for each
/// publication split evenly across all listed co-authors, roster members or
/// not. Members are visited in sorted-name order for bit-stable sums.
inline ScoreRecord school_score(std::string_view school, const Roster& roster,
                                const CorpusSnapshot& snapshot, const PointsTable& table,
                                Window window, int analysis_year) {
    auto it = roster.by_school().find(std::string(school));
    if (it == roster.by_school().end())
        throw data_error("unknown school \"" + std::string(school) + "\"");
    ScoreRecord rec;
    rec.entity = std::string(school);
    for (const std::string& member : it->second) {
        ScoreRecord m = person_score(member, snapshot, table, window, analysis_year);
        rec.total += m.total;
        rec.adjusted_total += m.adjusted_total;
        for (const auto& [area, v] : m.adjusted_area_breakdown) {
            rec.area_breakdown[area] += v;
            rec.adjusted_area_breakdown[area] += v;
        }
    }
    rec.num_areas = static_cast<int>(rec.area_breakdown.size());
    return rec;
}

struct CsrBaselineInput {
    std::map<std::string, double> adjusted_counts;
    int num_areas = 27;
};

/// CSRankings-style baseline: the num_areas-th root of the product of
/// (adjusted count + 1) over all areas; absent areas contribute factor 1.
inline double csr_score(const CsrBaselineInput& input) {
    if (input.num_areas < 1) throw data_error("csr_score: num_areas must be >= 1");
    double product = 1.0;
    for (const auto& [area, count] : input.adjusted_counts) {
        if (count < 0) throw data_error("csr_score: negative count for area \"" + area + "\"");
        product *= count + 1.0;
    }
    return std::pow(product, 1.0 / static_cast<double>(input.num_areas));
}

struct RankedEntry {
    int rank = 0;
    std::string entity;
    double score = 0;

    bool operator==(const RankedEntry&) const = default;
};

/// Competition ranking: scores non-increasing, ties share the smallest rank
/// (1,2,2,4), tie order by entity name.
struct RankedList {
    std::vector<RankedEntry> entries;

    std::optional<int> rank_of(std::string_view entity) const {
        for (const auto& e : entries)
            if (e.entity == entity) return e.rank;
        return std::nullopt;
    }
};

inline RankedList rank(const std::map<std::string, double>& scores) {
    RankedList list;
    list.entries.reserve(scores.size());
    for (const auto& [entity, score] : scores) list.entries.push_back({0, entity, score});
    std::sort(list.entries.begin(), list.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.entity < b.entity;
    });
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        if (i > 0 && list.entries[i].score == list.entries[i - 1].score)
            list.entries[i].rank = list.entries[i - 1].rank;
        else
            list.entries[i].rank = static_cast<int>(i) + 1;
    }
    return list;
}

struct RankDeltas {
    std::map<std::string, int> deltas;    // baseline rank - points rank
    int only_in_points = 0;
    int only_in_baseline = 0;
};

/// One-pass scores for the whole roster. Produces, per member, the same
/// sums as person_score (identical accumulation order, so bit-identical),
/// plus first-author totals and the per-school adjusted publication counts
/// the CSRankings baseline needs. Publications in areas without defined
/// points are skipped and counted rather than fatal, since a corpus-wide
/// run may legitimately contain areas excluded from the points table.
struct RosterScores {
    std::map<std::string, ScoreRecord> persons;                        // every roster member
    std::map<std::string, double> first_author_totals;                 // per member
    std::map<std::string, std::map<std::string, double>> school_adjusted_counts;
    std::uint64_t pubs_skipped_undefined = 0;
};

inline RosterScores score_roster(const Roster& roster, const CorpusSnapshot& snapshot,
                                 const PointsTable& table, Window window, int analysis_year,
                                 const Registry& registry) {
    RosterScores out;
    for (const FacultyRecord& rec : roster.records()) {
        ScoreRecord zero;
        zero.entity = rec.dblp_name;
        out.persons.emplace(rec.dblp_name, std::move(zero));
        out.first_author_totals.emplace(rec.dblp_name, 0.0);
    }
    for (const Publication& p : snapshot.publications) {
        bool in_window = window.contains(p.year);
        auto pts_it = table.points.find(p.area);
        bool defined = pts_it != table.points.end();
        if (in_window && !defined) ++out.pubs_skipped_undefined;
        const Area* area = registry.find_area(p.area);
        bool theory = area && area->parent == ParentArea::Theory;
        double n = static_cast<double>(p.authors.size());
        for (std::size_t i = 0; i < p.authors.size(); ++i) {
            const FacultyRecord* fac = roster.match_exact(p.authors[i]);
            if (!fac) continue;
            ScoreRecord& person = out.persons.find(fac->dblp_name)->second;
            if (!person.first_year || p.year < *person.first_year) person.first_year = p.year;
            if (!in_window || !defined) continue;
            double pts = pts_it->second;
            double adjusted = pts / n;
            person.total += pts;
            person.adjusted_total += adjusted;
            person.area_breakdown[p.area] += pts;
            person.adjusted_area_breakdown[p.area] += adjusted;
            out.school_adjusted_counts[fac->affiliation][p.area] += 1.0 / n;
            if (theory || i == 0) out.first_author_totals[fac->dblp_name] += pts;
        }
    }
    for (auto& [name, person] : out.persons) {
        person.num_areas = static_cast<int>(person.area_breakdown.size());
        if (person.first_year && person.total > 0) {
            int divisor = detail::per_year_divisor(analysis_year, *person.first_year);
            person.per_year = person.total / divisor;
            person.adjusted_per_year = person.adjusted_total / divisor;
        }
    }
    return out;
}

/// Assembles a school's record from bulk person scores exactly the way
/// school_score does: members in sorted-name order.
inline ScoreRecord school_record_from(const RosterScores& scores, const Roster& roster,
                                      std::string_view school) {
    auto it = roster.by_school().find(std::string(school));
    if (it == roster.by_school().end())
        throw data_error("unknown school \"" + std::string(school) + "\"");
    ScoreRecord rec;
    rec.entity = std::string(school);
    for (const std::string& member : it->second) {
        const ScoreRecord& m = scores.persons.at(member);
        rec.total += m.total;
        rec.adjusted_total += m.adjusted_total;
        for (const auto& [area, v] : m.adjusted_area_breakdown) {
            rec.area_breakdown[area] += v;
            rec.adjusted_area_breakdown[area] += v;
        }
    }
    rec.num_areas = static_cast<int>(rec.area_breakdown.size());
    return rec;
}

/// Positive delta: the entity gained rank under the points metric.
inline RankDeltas rank_delta(const RankedList& points, const RankedList& baseline) {
    std::map<std::string, int> baseline_ranks;
    for (const auto& e : baseline.entries) baseline_ranks.emplace(e.entity, e.rank);
    RankDeltas out;
    std::size_t shared = 0;
    for (const auto& e : points.entries) {
        auto it = baseline_ranks.find(e.entity);
        if (it == baseline_ranks.end()) {
            ++out.only_in_points;
            continue;
        }
        ++shared;
        out.deltas[e.entity] = it->second - e.rank;
    }
    out.only_in_baseline = static_cast<int>(baseline.entries.size() - shared);
    return out;
}

}  // namespace pubpoints
