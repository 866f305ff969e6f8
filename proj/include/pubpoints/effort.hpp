#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pubpoints/corpus.hpp"
#include "pubpoints/roster.hpp"
#include "pubpoints/util.hpp"

namespace pubpoints {

/// faculty name -> set of areas they published in within the window.
using Memberships = std::map<std::string, std::set<std::string>>;

/// faculty name -> area -> fraction of that person's unit effort.
/// Fractions for one person are equal and sum to 1; inactive faculty are absent.
struct AllocationTable {
    std::map<std::string, std::map<std::string, double>> fractions;
};

using EffortByArea = std::map<std::string, double>;       // F_a, fractional person-units
using CountByArea = std::map<std::string, std::int64_t>;  // P_a, papers

/// Normalized per-area effort: points of the reference area are exactly 1.
struct PointsTable {
    std::string reference_area;
    Window window;
    std::map<std::string, double> points;
    std::vector<std::string> undefined_areas;   // excluded: no publications or no effort

    bool defined(std::string_view area) const { return points.count(std::string(area)) != 0; }
};

/// Per-area row of the effort table.
struct AreaStats {
    std::string area;            // abbrev
    double faculty_effort = 0;   // F_a
    std::int64_t pub_count = 0;  // P_a
    double faculties_per_pub = 0;
    double points = 0;
};

/// Distinct areas in which `name` authored at least one in-window publication,
/// at any author position.
inline std::set<std::string> area_membership(std::string_view name, const CorpusSnapshot& snapshot,
                                             Window window) {
    std::set<std::string> areas;
    std::string wanted = normalize_whitespace(name);
    for (const Publication& p : snapshot.publications) {
        if (!window.contains(p.year)) continue;
        for (const std::string& a : p.authors) {
            if (a == wanted) {
                areas.insert(p.area);
                break;
            }
        }
    }
    return areas;
}

/// Memberships for every roster member with in-window publications.
/// One pass over the snapshot; faculty without publications are absent.
inline Memberships all_memberships(const Roster& roster, const CorpusSnapshot& snapshot, Window window) {
    Memberships m;
    for (const Publication& p : snapshot.publications) {
        if (!window.contains(p.year)) continue;
        for (const std::string& author : p.authors) {
            if (const FacultyRecord* rec = roster.match_author(author))
                m[rec->dblp_name].insert(p.area);
        }
    }
    return m;
}

/// Even split: a person active in k areas gets 1/k in each.
inline AllocationTable allocate(const Memberships& memberships) {
    AllocationTable table;
    for (const auto& [name, areas] : memberships) {
        if (areas.empty()) continue;
        double share = 1.0 / static_cast<double>(areas.size());
        auto& row = table.fractions[name];
        for (const std::string& a : areas) row[a] = share;
    }
    return table;
}

/// In-window publications per area; each publication counts once, in its area.
inline CountByArea count_pubs(const CorpusSnapshot& snapshot, Window window) {
    CountByArea counts;
    for (const Publication& p : snapshot.publications)
        if (window.contains(p.year)) ++counts[p.area];
    return counts;
}

/// F_a: sum of allocated fractions per area. Faculty are visited in name
/// order so the reduction is bit-stable.
inline EffortByArea faculty_effort(const AllocationTable& alloc) {
    EffortByArea effort;
    for (const auto& [name, row] : alloc.fractions)
        for (const auto& [area, fraction] : row) effort[area] += fraction;
    return effort;
}

/// points_a = (F_a / P_a) / (F_ref / P_ref). The reference area must have
/// positive effort and publications; areas with zero of either are excluded
/// and listed in `undefined_areas`.
inline PointsTable compute_points(const EffortByArea& effort, const CountByArea& counts,
                                  const std::string& reference_area, Window window = {}) {
    auto ref_effort = effort.find(reference_area);
    auto ref_count = counts.find(reference_area);
    if (ref_count == counts.end() || ref_count->second <= 0)
        throw data_error("reference area \"" + reference_area + "\" has no publications");
    if (ref_effort == effort.end() || ref_effort->second <= 0)
        throw data_error("reference area \"" + reference_area + "\" has no faculty effort");
    double ref_ratio = ref_effort->second / static_cast<double>(ref_count->second);

    PointsTable table;
    table.reference_area = reference_area;
    table.window = window;

    std::set<std::string> all_areas;
    for (const auto& [a, f] : effort) all_areas.insert(a);
    for (const auto& [a, c] : counts) all_areas.insert(a);
    for (const std::string& area : all_areas) {
        auto fe = effort.find(area);
        auto pc = counts.find(area);
        double f = fe == effort.end() ? 0.0 : fe->second;
        std::int64_t p = pc == counts.end() ? 0 : pc->second;
        if (p <= 0 || f <= 0) {
            table.undefined_areas.push_back(area);
            continue;
        }
        table.points[area] = (f / static_cast<double>(p)) / ref_ratio;
    }
    return table;
}

/// Rows for every defined area, sorted by abbrev.
inline std::vector<AreaStats> area_stats(const EffortByArea& effort, const CountByArea& counts,
                                         const PointsTable& table) {
    std::vector<AreaStats> rows;
    for (const auto& [area, points] : table.points) {
        AreaStats s;
        s.area = area;
        s.faculty_effort = effort.at(area);
        s.pub_count = counts.at(area);
        s.faculties_per_pub = s.faculty_effort / static_cast<double>(s.pub_count);
        s.points = points;
        rows.push_back(std::move(s));
    }
    return rows;
}

}  // namespace pubpoints
