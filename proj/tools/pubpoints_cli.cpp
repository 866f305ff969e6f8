// pubpoints: effort-normalized publication points over a DBLP dump and a
// faculty roster. Subcommands mirror the pipeline stages: ingest a dump into
// a snapshot, compute the per-area points table, rank schools against the
// geometric-mean baseline, score people, and emit radar/histogram data.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pubpoints/corpus.hpp"
#include "pubpoints/effort.hpp"
#include "pubpoints/registry.hpp"
#include "pubpoints/report.hpp"
#include "pubpoints/roster.hpp"
#include "pubpoints/scoring.hpp"

namespace {

using namespace pubpoints;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open \"" + path + "\" for reading");
    return in;
}

Registry load_registry_opt(const std::string& path) {
    if (path.empty()) return Registry::defaults();
    auto in = open_input(path);
    return Registry::from_config(in);
}

Roster load_roster_file(const std::string& path) {
    auto in = open_input(path);
    return Roster::load(in);
}

CorpusSnapshot load_corpus(const std::string& snapshot_path, const std::string& dblp_path,
                           const Registry& registry) {
    if (!snapshot_path.empty()) {
        auto in = open_input(snapshot_path);
        return read_snapshot(in);
    }
    if (!dblp_path.empty()) {
        auto in = open_input(dblp_path);
        return ingest_dblp(in, registry);
    }
    throw UsageError("either --snapshot or --dblp is required");
}

std::vector<std::string> read_names_file(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        std::string name = normalize_whitespace(line);
        if (!name.empty()) names.push_back(std::move(name));
    }
    return names;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw data_error("cannot open \"" + out_path + "\" for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw data_error("write to \"" + out_path + "\" failed");
}

struct CommonOpts {
    std::string dblp_path;
    std::string roster_path;
    std::string registry_path;
    std::string snapshot_path;
    std::string counts_path;
    std::string window_s = "2019-2023";
    int analysis_year = 2024;
    std::string reference_area = "mlmining";
    std::string format_s = "csv";
    std::string out_path;

    Window window() const {
        try {
            return Window::parse(window_s);
        } catch (const config_error& e) {
            throw UsageError(e.what());   // malformed flag value, not bad data
        }
    }

    OutputFormat format() const {
        auto f = parse_output_format(format_s);
        if (!f) throw UsageError("unknown format \"" + format_s + "\" (expected csv or json)");
        return *f;
    }

    void validate() const {
        format();  // flags a bad --format before any data is touched
        Window w = window();
        if (analysis_year < w.end_year)
            throw UsageError("--analysis-year must not precede the window end");
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_counts = false) {
    cmd->add_option("--dblp", o.dblp_path, "DBLP XML dump to ingest");
    cmd->add_option("--roster", o.roster_path, "faculty roster CSV");
    cmd->add_option("--registry", o.registry_path, "registry config (defaults built in)");
    cmd->add_option("--snapshot", o.snapshot_path, "snapshot file (read, or written by ingest)");
    if (with_counts)
        cmd->add_option("--counts", o.counts_path, "pre-aggregated area,faculty_count,pub_count CSV");
    cmd->add_option("--window", o.window_s, "inclusive year window YYYY-YYYY")->capture_default_str();
    cmd->add_option("--analysis-year", o.analysis_year, "year per-year averages divide up to")
        ->capture_default_str();
    cmd->add_option("--reference-area", o.reference_area, "area whose points are 1.0")
        ->capture_default_str();
    cmd->add_option("--format", o.format_s, "csv or json")->capture_default_str();
    cmd->add_option("--out", o.out_path, "output file (stdout when omitted)");
}

// Points table plus the effort/count inputs behind it.
struct PointsBundle {
    EffortByArea effort;
    CountByArea counts;
    PointsTable table;
};

PointsBundle derive_points(const Roster* roster, const CorpusSnapshot* snapshot,
                           const CommonOpts& o) {
    PointsBundle b;
    if (!o.counts_path.empty()) {
        auto in = open_input(o.counts_path);
        std::tie(b.effort, b.counts) = load_area_counts(in);
    } else {
        if (!roster || !snapshot)
            throw UsageError("--roster plus --snapshot/--dblp (or --counts) are required");
        b.effort = faculty_effort(allocate(all_memberships(*roster, *snapshot, o.window())));
        b.counts = count_pubs(*snapshot, o.window());
    }
    b.table = compute_points(b.effort, b.counts, o.reference_area, o.window());
    return b;
}

int cmd_ingest(const CommonOpts& o) {
    if (o.dblp_path.empty()) throw UsageError("ingest requires --dblp");
    if (o.snapshot_path.empty()) throw UsageError("ingest requires --snapshot (output path)");
    Registry registry = load_registry_opt(o.registry_path);
    auto in = open_input(o.dblp_path);
    CorpusSnapshot snap = ingest_dblp(in, registry);
    std::ofstream out(o.snapshot_path, std::ios::binary);
    if (!out) throw data_error("cannot open \"" + o.snapshot_path + "\" for writing");
    write_snapshot(snap, out);
    std::cout << "scanned=" << snap.stats.records_scanned << " matched=" << snap.stats.records_matched
              << " skipped=" << snap.stats.records_skipped << "\n";
    return 0;
}

int cmd_points(const CommonOpts& o) {
    o.validate();
    Registry registry = load_registry_opt(o.registry_path);
    std::optional<Roster> roster;
    std::optional<CorpusSnapshot> snapshot;
    if (o.counts_path.empty()) {
        if (o.roster_path.empty()) throw UsageError("points requires --roster (or --counts)");
        roster = load_roster_file(o.roster_path);
        snapshot = load_corpus(o.snapshot_path, o.dblp_path, registry);
    }
    PointsBundle b = derive_points(roster ? &*roster : nullptr, snapshot ? &*snapshot : nullptr, o);
    PointsReport report = build_points_report(registry, b.effort, b.counts, o.reference_area, o.window());
    for (const std::string& a : report.undefined_areas)
        std::cerr << "warning: area \"" << a << "\" has no defined points\n";
    write_output(o.out_path, o.format() == OutputFormat::csv ? render_csv(report) : render_json(report));
    return 0;
}

int cmd_rank_schools(const CommonOpts& o) {
    o.validate();
    Registry registry = load_registry_opt(o.registry_path);
    if (o.roster_path.empty()) throw UsageError("rank-schools requires --roster");
    Roster roster = load_roster_file(o.roster_path);
    CorpusSnapshot snapshot = load_corpus(o.snapshot_path, o.dblp_path, registry);
    PointsBundle b = derive_points(&roster, &snapshot, o);
    RosterScores scores = score_roster(roster, snapshot, b.table, o.window(), o.analysis_year, registry);
    SchoolRankingReport report = build_school_ranking(registry, roster, scores, o.window());
    write_output(o.out_path, o.format() == OutputFormat::csv ? render_csv(report) : render_json(report));
    return 0;
}

int cmd_score_person(const CommonOpts& o, const std::vector<std::string>& names,
                     const std::string& names_file) {
    o.validate();
    Registry registry = load_registry_opt(o.registry_path);
    std::vector<std::string> all_names = names;
    if (!names_file.empty()) {
        auto more = read_names_file(names_file);
        all_names.insert(all_names.end(), more.begin(), more.end());
    }
    if (all_names.empty()) throw UsageError("score-person requires names or --names-file");
    std::optional<Roster> roster;
    if (!o.roster_path.empty()) roster = load_roster_file(o.roster_path);
    CorpusSnapshot snapshot = load_corpus(o.snapshot_path, o.dblp_path, registry);
    PointsBundle b = derive_points(roster ? &*roster : nullptr, &snapshot, o);
    PersonReport report =
        build_person_report(all_names, registry, snapshot, b.table, o.window(), o.analysis_year);
    for (const PersonRow& row : report.rows)
        if (!row.found) std::cerr << "warning: \"" << row.name << "\" has no publications in scope\n";
    write_output(o.out_path, o.format() == OutputFormat::csv ? render_csv(report) : render_json(report));
    return 0;
}

int cmd_radar(const CommonOpts& o, const std::vector<std::string>& schools) {
    o.validate();
    if (schools.empty()) throw UsageError("radar requires at least one school");
    Registry registry = load_registry_opt(o.registry_path);
    if (o.roster_path.empty()) throw UsageError("radar requires --roster");
    Roster roster = load_roster_file(o.roster_path);
    for (const std::string& s : schools)
        if (!roster.has_school(s)) throw data_error("unknown school \"" + s + "\"");
    CorpusSnapshot snapshot = load_corpus(o.snapshot_path, o.dblp_path, registry);
    PointsBundle b = derive_points(&roster, &snapshot, o);
    RosterScores scores = score_roster(roster, snapshot, b.table, o.window(), o.analysis_year, registry);
    RadarReport report = build_radar(schools, registry, roster, scores, o.window());
    write_output(o.out_path, o.format() == OutputFormat::csv ? render_csv(report) : render_json(report));
    return 0;
}

int cmd_hist(const CommonOpts& o, const std::string& metric_s, double bin_width,
             const std::string& names_file) {
    o.validate();
    auto metric = parse_hist_metric(metric_s);
    if (!metric)
        throw UsageError("unknown metric \"" + metric_s +
                         "\" (total|adjusted|per_year|adjusted_per_year|first_author)");
    if (!(bin_width > 0)) throw UsageError("--bin-width must be positive");
    Registry registry = load_registry_opt(o.registry_path);
    if (o.roster_path.empty() && names_file.empty())
        throw UsageError("hist requires --roster or --names-file");
    std::optional<Roster> roster;
    if (!o.roster_path.empty()) roster = load_roster_file(o.roster_path);
    CorpusSnapshot snapshot = load_corpus(o.snapshot_path, o.dblp_path, registry);
    PointsBundle b = derive_points(roster ? &*roster : nullptr, &snapshot, o);
    HistReport report;
    if (!names_file.empty()) {
        report = build_hist(*metric, bin_width, read_names_file(names_file), registry, snapshot, b.table,
                            o.window(), o.analysis_year);
    } else {
        RosterScores scores =
            score_roster(*roster, snapshot, b.table, o.window(), o.analysis_year, registry);
        report = build_hist(*metric, bin_width, scores);
    }
    write_output(o.out_path, o.format() == OutputFormat::csv ? render_csv(report) : render_json(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"effort-normalized publication points over DBLP data"};
    app.require_subcommand(1);

    CommonOpts ingest_o, points_o, rank_o, person_o, radar_o, hist_o;
    std::vector<std::string> person_names, radar_schools;
    std::string person_names_file, hist_names_file, hist_metric = "total";
    double hist_bin_width = 0;

    CLI::App* c_ingest = app.add_subcommand("ingest", "stream a DBLP dump into a snapshot");
    add_common(c_ingest, ingest_o);

    CLI::App* c_points = app.add_subcommand("points", "per-area effort and points table");
    add_common(c_points, points_o, /*with_counts=*/true);

    CLI::App* c_rank = app.add_subcommand("rank-schools", "rank schools with baseline comparison");
    add_common(c_rank, rank_o);

    CLI::App* c_person = app.add_subcommand("score-person", "score people by name");
    add_common(c_person, person_o, /*with_counts=*/true);
    c_person->add_option("names", person_names, "person names (DBLP convention)");
    c_person->add_option("--names-file", person_names_file, "file with one name per line");

    CLI::App* c_radar = app.add_subcommand("radar", "per-school per-area adjusted points matrix");
    add_common(c_radar, radar_o);
    c_radar->add_option("schools", radar_schools, "school names as in the roster");

    CLI::App* c_hist = app.add_subcommand("hist", "binned score distribution");
    add_common(c_hist, hist_o, /*with_counts=*/true);
    c_hist->add_option("--metric", hist_metric,
                       "total|adjusted|per_year|adjusted_per_year|first_author")
        ->capture_default_str();
    c_hist->add_option("--bin-width", hist_bin_width, "histogram bin width in points")->required();
    c_hist->add_option("--names-file", hist_names_file, "score these names instead of the roster");

    try {
        app.parse(argc, argv);
        if (c_ingest->parsed()) return cmd_ingest(ingest_o);
        if (c_points->parsed()) return cmd_points(points_o);
        if (c_rank->parsed()) return cmd_rank_schools(rank_o);
        if (c_person->parsed()) return cmd_score_person(person_o, person_names, person_names_file);
        if (c_radar->parsed()) return cmd_radar(radar_o, radar_schools);
        if (c_hist->parsed()) return cmd_hist(hist_o, hist_metric, hist_bin_width, hist_names_file);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
