#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pubpoints/csv.hpp"
#include "pubpoints/effort.hpp"
#include "pubpoints/registry.hpp"
#include "pubpoints/roster.hpp"
#include "pubpoints/scoring.hpp"
#include "pubpoints/util.hpp"

namespace pubpoints {

enum class OutputFormat { csv, json };

inline std::optional<OutputFormat> parse_output_format(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    return std::nullopt;
}

/// Two-decimal display formatting, matching the table style of the reports.
inline std::string format2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// points

struct PointsRow {
    std::string area;        // abbrev
    std::string area_name;
    double faculty_effort = 0;
    std::int64_t pub_count = 0;
    double faculties_per_pub = 0;
    double points = 0;
};

struct PointsReport {
    Window window;
    std::string reference_area;
    std::vector<PointsRow> rows;                 // defined areas, sorted by abbrev
    std::vector<std::string> undefined_areas;    // registry areas without points
};

inline PointsReport build_points_report(const Registry& registry, const EffortByArea& effort,
                                        const CountByArea& counts, const std::string& reference_area,
                                        Window window) {
    PointsTable table = compute_points(effort, counts, reference_area, window);
    PointsReport report;
    report.window = window;
    report.reference_area = reference_area;
    for (const AreaStats& s : area_stats(effort, counts, table)) {
        const Area* area = registry.find_area(s.area);
        report.rows.push_back(PointsRow{s.area, area ? area->name : s.area, s.faculty_effort,
                                        s.pub_count, s.faculties_per_pub, s.points});
    }
    for (const Area& a : registry.areas())
        if (!table.defined(a.abbrev)) report.undefined_areas.push_back(a.abbrev);
    for (const std::string& a : table.undefined_areas)
        if (!registry.find_area(a)) report.undefined_areas.push_back(a);
    std::sort(report.undefined_areas.begin(), report.undefined_areas.end());
    return report;
}

inline PointsReport build_points_report(const Registry& registry, const Roster& roster,
                                        const CorpusSnapshot& snapshot, const std::string& reference_area,
                                        Window window) {
    Memberships memberships = all_memberships(roster, snapshot, window);
    EffortByArea effort = faculty_effort(allocate(memberships));
    CountByArea counts = count_pubs(snapshot, window);
    return build_points_report(registry, effort, counts, reference_area, window);
}

/// Pre-aggregated (faculty effort, publication count) pairs per area, as an
/// alternative to a corpus. Header: area,faculty_count,pub_count
inline std::pair<EffortByArea, CountByArea> load_area_counts(std::istream& in) {
    std::vector<std::string> row;
    std::size_t line = 0;
    if (!csv::read_row(in, row, line) || row.size() != 3 || row[0] != "area" ||
        row[1] != "faculty_count" || row[2] != "pub_count")
        throw config_error("counts file: expected header \"area,faculty_count,pub_count\"");
    EffortByArea effort;
    CountByArea counts;
    while (csv::read_row(in, row, line)) {
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != 3)
            throw config_error("counts file line " + std::to_string(line) + ": expected 3 fields");
        std::string area = std::string(trim(row[0]));
        if (area.empty())
            throw config_error("counts file line " + std::to_string(line) + ": empty area");
        if (effort.count(area))
            throw config_error("counts file line " + std::to_string(line) + ": duplicate area \"" +
                               area + "\"");
        try {
            std::size_t used = 0;
            double f = std::stod(row[1], &used);
            if (used != row[1].size()) throw std::invalid_argument("trailing");
            long long p = std::stoll(row[2], &used);
            if (used != row[2].size()) throw std::invalid_argument("trailing");
            if (f < 0 || p < 0)
                throw config_error("counts file line " + std::to_string(line) + ": negative value");
            effort[area] = f;
            counts[area] = p;
        } catch (const config_error&) {
            throw;
        } catch (const std::exception&) {
            throw config_error("counts file line " + std::to_string(line) + ": bad number");
        }
    }
    return {std::move(effort), std::move(counts)};
}

inline std::string render_csv(const PointsReport& r) {
    std::ostringstream out;
    out << "area,area_name,faculty_count,pub_count,faculties_per_pub,points\n";
    for (const PointsRow& row : r.rows)
        csv::write_row(out, {row.area, row.area_name, format2(row.faculty_effort),
                             std::to_string(row.pub_count), format2(row.faculties_per_pub),
                             format2(row.points)});
    return out.str();
}

inline std::string render_json(const PointsReport& r) {
    nlohmann::ordered_json j;
    j["command"] = "points";
    j["window"] = {{"start_year", r.window.start_year}, {"end_year", r.window.end_year}};
    j["reference_area"] = r.reference_area;
    j["rows"] = nlohmann::ordered_json::array();
    for (const PointsRow& row : r.rows)
        j["rows"].push_back({{"area", row.area},
                             {"area_name", row.area_name},
                             {"faculty_count", row.faculty_effort},
                             {"pub_count", row.pub_count},
                             {"faculties_per_pub", row.faculties_per_pub},
                             {"points", row.points}});
    j["undefined_areas"] = r.undefined_areas;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// rank-schools

struct SchoolRankRow {
    int rank = 0;
    std::string school;
    double points = 0;        // adjusted points, the headline metric
    int baseline_rank = 0;
    int delta = 0;            // baseline_rank - rank
};

struct SchoolRankingReport {
    Window window;
    std::vector<SchoolRankRow> rows;   // by rank, then school name
};

inline SchoolRankingReport build_school_ranking(const Registry& registry, const Roster& roster,
                                                const RosterScores& scores, Window window) {
    std::map<std::string, double> points_by_school;
    std::map<std::string, double> baseline_by_school;
    int n_areas = static_cast<int>(registry.areas().size());
    for (const auto& [school, members] : roster.by_school()) {
        ScoreRecord rec = school_record_from(scores, roster, school);
        points_by_school[school] = rec.adjusted_total;
        CsrBaselineInput input;
        input.num_areas = n_areas;
        auto it = scores.school_adjusted_counts.find(school);
        if (it != scores.school_adjusted_counts.end()) input.adjusted_counts = it->second;
        baseline_by_school[school] = csr_score(input);
    }
    RankedList by_points = rank(points_by_school);
    RankedList by_baseline = rank(baseline_by_school);
    RankDeltas deltas = rank_delta(by_points, by_baseline);

    std::map<std::string, int> baseline_rank;
    for (const auto& e : by_baseline.entries) baseline_rank[e.entity] = e.rank;

    SchoolRankingReport report;
    report.window = window;
    for (const RankedEntry& e : by_points.entries)
        report.rows.push_back(SchoolRankRow{e.rank, e.entity, e.score, baseline_rank.at(e.entity),
                                            deltas.deltas.at(e.entity)});
    return report;
}

inline std::string render_csv(const SchoolRankingReport& r) {
    std::ostringstream out;
    out << "rank,school,points,baseline_rank,delta\n";
    for (const SchoolRankRow& row : r.rows)
        csv::write_row(out, {std::to_string(row.rank), row.school, format2(row.points),
                             std::to_string(row.baseline_rank), std::to_string(row.delta)});
    return out.str();
}

inline std::string render_json(const SchoolRankingReport& r) {
    nlohmann::ordered_json j;
    j["command"] = "rank-schools";
    j["window"] = {{"start_year", r.window.start_year}, {"end_year", r.window.end_year}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const SchoolRankRow& row : r.rows)
        j["rows"].push_back({{"rank", row.rank},
                             {"school", row.school},
                             {"points", row.points},
                             {"baseline_rank", row.baseline_rank},
                             {"delta", row.delta}});
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// score-person

struct PersonRow {
    std::string name;
    bool found = false;        // had at least one in-scope publication
    int num_areas = 0;
    std::optional<int> first_year;
    double total = 0;
    double adjusted = 0;
    double per_year = 0;
    double adjusted_per_year = 0;
    double first_author_total = 0;
};

struct PersonReport {
    Window window;
    int analysis_year = 0;
    std::vector<PersonRow> rows;   // sorted by name
};

inline PersonReport build_person_report(std::vector<std::string> names, const Registry& registry,
                                        const CorpusSnapshot& snapshot, const PointsTable& table,
                                        Window window, int analysis_year) {
    PersonReport report;
    report.window = window;
    report.analysis_year = analysis_year;
    std::sort(names.begin(), names.end());
    for (const std::string& name : names) {
        ScoreRecord rec = person_score(name, snapshot, table, window, analysis_year);
        PersonRow row;
        row.name = rec.entity;
        row.found = rec.first_year.has_value();
        row.num_areas = rec.num_areas;
        row.first_year = rec.first_year;
        row.total = rec.total;
        row.adjusted = rec.adjusted_total;
        row.per_year = rec.per_year;
        row.adjusted_per_year = rec.adjusted_per_year;
        row.first_author_total = first_author_points(name, snapshot, table, window, registry);
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline std::string render_csv(const PersonReport& r) {
    std::ostringstream out;
    out << "name,num_areas,first_year,total,adjusted,per_year,adjusted_per_year,first_author_total\n";
    for (const PersonRow& row : r.rows)
        csv::write_row(out, {row.name, std::to_string(row.num_areas),
                             row.first_year ? std::to_string(*row.first_year) : "",
                             format2(row.total), format2(row.adjusted), format2(row.per_year),
                             format2(row.adjusted_per_year), format2(row.first_author_total)});
    return out.str();
}

inline std::string render_json(const PersonReport& r) {
    nlohmann::ordered_json j;
    j["command"] = "score-person";
    j["window"] = {{"start_year", r.window.start_year}, {"end_year", r.window.end_year}};
    j["analysis_year"] = r.analysis_year;
    j["rows"] = nlohmann::ordered_json::array();
    for (const PersonRow& row : r.rows) {
        nlohmann::ordered_json e;
        e["name"] = row.name;
        e["found"] = row.found;
        e["num_areas"] = row.num_areas;
        if (row.first_year)
            e["first_year"] = *row.first_year;
        else
            e["first_year"] = nullptr;
        e["total"] = row.total;
        e["adjusted"] = row.adjusted;
        e["per_year"] = row.per_year;
        e["adjusted_per_year"] = row.adjusted_per_year;
        e["first_author_total"] = row.first_author_total;
        j["rows"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// radar

struct RadarReport {
    Window window;
    std::vector<std::string> areas;                              // all registry areas, by abbrev
    std::vector<std::pair<std::string, std::vector<double>>> rows;  // by school name
};

inline RadarReport build_radar(std::vector<std::string> schools, const Registry& registry,
                               const Roster& roster, const RosterScores& scores, Window window) {
    RadarReport report;
    report.window = window;
    for (const Area& a : registry.areas()) report.areas.push_back(a.abbrev);
    std::sort(report.areas.begin(), report.areas.end());
    std::sort(schools.begin(), schools.end());
    for (const std::string& school : schools) {
        ScoreRecord rec = school_record_from(scores, roster, school);
        std::vector<double> values;
        values.reserve(report.areas.size());
        for (const std::string& area : report.areas) {
            auto it = rec.area_breakdown.find(area);
            values.push_back(it == rec.area_breakdown.end() ? 0.0 : it->second);
        }
        report.rows.emplace_back(school, std::move(values));
    }
    return report;
}

inline std::string render_csv(const RadarReport& r) {
    std::ostringstream out;
    std::vector<std::string> header{"school"};
    header.insert(header.end(), r.areas.begin(), r.areas.end());
    csv::write_row(out, header);
    for (const auto& [school, values] : r.rows) {
        std::vector<std::string> fields{school};
        for (double v : values) fields.push_back(format2(v));
        csv::write_row(out, fields);
    }
    return out.str();
}

inline std::string render_json(const RadarReport& r) {
    nlohmann::ordered_json j;
    j["command"] = "radar";
    j["window"] = {{"start_year", r.window.start_year}, {"end_year", r.window.end_year}};
    j["areas"] = r.areas;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& [school, values] : r.rows)
        j["rows"].push_back({{"school", school}, {"points", values}});
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// hist

/// Left-closed right-open bins of a fixed width starting at 0; trailing empty
/// bins are trimmed, interior empty bins stay.
struct Histogram {
    double bin_width = 0;
    std::vector<std::pair<double, std::uint64_t>> bins;   // (lower_edge, count)
};

inline Histogram make_histogram(const std::vector<double>& values, double bin_width) {
    if (!(bin_width > 0)) throw data_error("histogram bin width must be positive");
    Histogram h;
    h.bin_width = bin_width;
    std::vector<std::uint64_t> counts;
    for (double v : values) {
        if (v < 0 || !std::isfinite(v))
            throw data_error("histogram values must be finite and non-negative");
        auto idx = static_cast<std::size_t>(std::floor(v / bin_width));
        if (idx >= counts.size()) counts.resize(idx + 1, 0);
        ++counts[idx];
    }
    while (!counts.empty() && counts.back() == 0) counts.pop_back();
    for (std::size_t i = 0; i < counts.size(); ++i)
        h.bins.emplace_back(static_cast<double>(i) * bin_width, counts[i]);
    return h;
}

enum class HistMetric { total, adjusted, per_year, adjusted_per_year, first_author };

inline std::optional<HistMetric> parse_hist_metric(std::string_view s) {
    if (s == "total") return HistMetric::total;
    if (s == "adjusted") return HistMetric::adjusted;
    if (s == "per_year") return HistMetric::per_year;
    if (s == "adjusted_per_year") return HistMetric::adjusted_per_year;
    if (s == "first_author") return HistMetric::first_author;
    return std::nullopt;
}

inline std::string_view to_string(HistMetric m) {
    switch (m) {
        case HistMetric::total: return "total";
        case HistMetric::adjusted: return "adjusted";
        case HistMetric::per_year: return "per_year";
        case HistMetric::adjusted_per_year: return "adjusted_per_year";
        case HistMetric::first_author: return "first_author";
    }
    return "?";
}

struct HistReport {
    HistMetric metric = HistMetric::total;
    std::uint64_t entity_count = 0;
    Histogram histogram;
};

/// Histogram over all roster members (name order determines nothing here,
/// but a deterministic order keeps float accumulation stable upstream).
inline HistReport build_hist(HistMetric metric, double bin_width, const RosterScores& scores) {
    std::vector<double> values;
    values.reserve(scores.persons.size());
    for (const auto& [name, rec] : scores.persons) {
        switch (metric) {
            case HistMetric::total: values.push_back(rec.total); break;
            case HistMetric::adjusted: values.push_back(rec.adjusted_total); break;
            case HistMetric::per_year: values.push_back(rec.per_year); break;
            case HistMetric::adjusted_per_year: values.push_back(rec.adjusted_per_year); break;
            case HistMetric::first_author:
                values.push_back(scores.first_author_totals.at(name));
                break;
        }
    }
    HistReport report;
    report.metric = metric;
    report.entity_count = values.size();
    report.histogram = make_histogram(values, bin_width);
    return report;
}

/// Histogram over an explicit name list (e.g. faculty candidates).
inline HistReport build_hist(HistMetric metric, double bin_width, const std::vector<std::string>& names,
                             const Registry& registry, const CorpusSnapshot& snapshot,
                             const PointsTable& table, Window window, int analysis_year) {
    std::vector<double> values;
    values.reserve(names.size());
    for (const std::string& name : names) {
        if (metric == HistMetric::first_author) {
            values.push_back(first_author_points(name, snapshot, table, window, registry));
            continue;
        }
        ScoreRecord rec = person_score(name, snapshot, table, window, analysis_year);
        switch (metric) {
            case HistMetric::total: values.push_back(rec.total); break;
            case HistMetric::adjusted: values.push_back(rec.adjusted_total); break;
            case HistMetric::per_year: values.push_back(rec.per_year); break;
            case HistMetric::adjusted_per_year: values.push_back(rec.adjusted_per_year); break;
            case HistMetric::first_author: break;
        }
    }
    HistReport report;
    report.metric = metric;
    report.entity_count = values.size();
    report.histogram = make_histogram(values, bin_width);
    return report;
}

inline std::string render_csv(const HistReport& r) {
    std::ostringstream out;
    out << "lower_edge,count\n";
    for (const auto& [edge, count] : r.histogram.bins)
        csv::write_row(out, {format2(edge), std::to_string(count)});
    return out.str();
}

inline std::string render_json(const HistReport& r) {
    nlohmann::ordered_json j;
    j["command"] = "hist";
    j["metric"] = std::string(to_string(r.metric));
    j["bin_width"] = r.histogram.bin_width;
    j["entity_count"] = r.entity_count;
    j["bins"] = nlohmann::ordered_json::array();
    for (const auto& [edge, count] : r.histogram.bins)
        j["bins"].push_back({{"lower_edge", edge}, {"count", count}});
    return j.dump(2) + "\n";
}

}  // namespace pubpoints
