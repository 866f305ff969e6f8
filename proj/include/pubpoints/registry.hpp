#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pubpoints/csv.hpp"
#include "pubpoints/util.hpp"

namespace pubpoints {

enum class ParentArea { AI, Systems, Theory, Interdisciplinary };

inline std::string_view to_string(ParentArea p) {
    switch (p) {
        case ParentArea::AI: return "AI";
        case ParentArea::Systems: return "Systems";
        case ParentArea::Theory: return "Theory";
        case ParentArea::Interdisciplinary: return "Interdisciplinary";
    }
    return "?";
}

inline std::optional<ParentArea> parse_parent_area(std::string_view s) {
    if (s == "AI") return ParentArea::AI;
    if (s == "Systems") return ParentArea::Systems;
    if (s == "Theory") return ParentArea::Theory;
    if (s == "Interdisciplinary") return ParentArea::Interdisciplinary;
    return std::nullopt;
}

struct Area {
    std::string abbrev;
    std::string name;
    ParentArea parent = ParentArea::AI;

    bool operator==(const Area&) const = default;
};

struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int year) const { return year >= first && year <= last; }
    bool overlaps(const YearRange& o) const { return first <= o.last && o.first <= last; }
    bool operator==(const YearRange&) const = default;
};

/// One DBLP key pattern. Matches a record when `prefix` is a prefix of the
/// record key, the record year falls in `years` (when set) and the record's
/// number element starts with `number_prefix` (when set). Number filters exist
/// for venues hosted inside a shared journal stream, e.g. the POPL and PLDI
/// issues of journals/pacmpl/.
struct KeyPattern {
    std::string prefix;
    std::string number_prefix;         // empty = no filter
    std::optional<YearRange> years;

    bool matches(std::string_view key, int year, std::string_view number) const {
        if (!key.starts_with(prefix)) return false;
        if (years && !years->contains(year)) return false;
        if (!number_prefix.empty() && !number.starts_with(number_prefix)) return false;
        return true;
    }
    bool operator==(const KeyPattern&) const = default;
};

struct Conference {
    std::string name;
    std::string area;                  // area abbrev
    std::vector<KeyPattern> key_patterns;

    bool operator==(const Conference&) const = default;
};

/// Immutable area/conference taxonomy with DBLP key resolution.
/// Built once (defaults or a config file), read concurrently afterwards.
class Registry {
public:
    struct Match {
        const Conference* conference = nullptr;
        const Area* area = nullptr;
    };

    static Registry build(std::vector<Area> areas, std::vector<Conference> conferences) {
        Registry r;
        r.areas_ = std::move(areas);
        r.conferences_ = std::move(conferences);
        r.validate_and_index();
        return r;
    }

    /// The built-in CSRankings-derived table: 4 parents, 27 areas, 64 conferences.
    static const Registry& defaults();

    /// Parses a config table; the file fully replaces the defaults.
    static Registry from_config(std::istream& in);

    const std::vector<Area>& areas() const { return areas_; }
    const std::vector<Conference>& conferences() const { return conferences_; }

    const Area* find_area(std::string_view abbrev) const {
        auto it = area_index_.find(std::string(abbrev));
        return it == area_index_.end() ? nullptr : &areas_[it->second];
    }

    const Conference* find_conference(std::string_view name) const {
        for (const auto& c : conferences_)
            if (c.name == name) return &c;
        return nullptr;
    }

    /// Maps a DBLP record key to its unique conference and area, or nothing.
    /// Pattern disjointness (checked at load) makes the first match the only one.
    std::optional<Match> resolve(std::string_view key, int year, std::string_view number = {}) const {
        if (key.empty()) return std::nullopt;
        auto probe = [&](const std::vector<PatternRef>& refs) -> std::optional<Match> {
            for (const auto& ref : refs) {
                const auto& pat = conferences_[ref.conference].key_patterns[ref.pattern];
                if (pat.matches(key, year, number)) {
                    const Conference& conf = conferences_[ref.conference];
                    return Match{&conf, find_area(conf.area)};
                }
            }
            return std::nullopt;
        };
        if (auto root = stream_root(key)) {
            auto it = buckets_.find(*root);
            if (it != buckets_.end())
                if (auto m = probe(it->second)) return m;
        }
        return probe(unbucketed_);
    }

    void write_config(std::ostream& out) const;

    bool operator==(const Registry& o) const {
        return areas_ == o.areas_ && conferences_ == o.conferences_;
    }

private:
    struct PatternRef {
        std::size_t conference = 0;
        std::size_t pattern = 0;
    };

    // "conf/iclr/Abc23" -> "conf/iclr/". Nothing when fewer than two slashes;
    // a pattern without a complete root ("conf/") cannot be bucketed.
    static std::optional<std::string_view> stream_root(std::string_view key) {
        auto p1 = key.find('/');
        if (p1 == std::string_view::npos) return std::nullopt;
        auto p2 = key.find('/', p1 + 1);
        if (p2 == std::string_view::npos) return std::nullopt;
        return key.substr(0, p2 + 1);
    }

    static bool patterns_can_collide(const KeyPattern& a, const KeyPattern& b) {
        bool prefix_overlap = a.prefix.starts_with(b.prefix) || b.prefix.starts_with(a.prefix);
        if (!prefix_overlap) return false;
        if (a.years && b.years && !a.years->overlaps(*b.years)) return false;
        if (!a.number_prefix.empty() && !b.number_prefix.empty() &&
            !(std::string_view(a.number_prefix).starts_with(b.number_prefix) ||
              std::string_view(b.number_prefix).starts_with(a.number_prefix)))
            return false;
        return true;
    }

    void validate_and_index() {
        area_index_.clear();
        for (std::size_t i = 0; i < areas_.size(); ++i) {
            auto [it, inserted] = area_index_.emplace(areas_[i].abbrev, i);
            if (!inserted)
                throw config_error("registry: duplicate area abbrev \"" + areas_[i].abbrev + "\"");
        }
        std::unordered_map<std::string, std::size_t> conf_names;
        for (std::size_t ci = 0; ci < conferences_.size(); ++ci) {
            const Conference& c = conferences_[ci];
            if (!conf_names.emplace(c.name, ci).second)
                throw config_error("registry: duplicate conference \"" + c.name + "\"");
            if (!area_index_.count(c.area))
                throw config_error("registry: conference \"" + c.name +
                                   "\" references unknown area \"" + c.area + "\"");
            if (c.key_patterns.empty())
                throw config_error("registry: conference \"" + c.name + "\" has no key patterns");
        }

        buckets_.clear();
        unbucketed_.clear();
        std::vector<PatternRef> all;
        for (std::size_t ci = 0; ci < conferences_.size(); ++ci)
            for (std::size_t pi = 0; pi < conferences_[ci].key_patterns.size(); ++pi)
                all.push_back({ci, pi});

        for (std::size_t i = 0; i < all.size(); ++i) {
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                if (all[i].conference == all[j].conference) continue;
                const auto& pa = conferences_[all[i].conference].key_patterns[all[i].pattern];
                const auto& pb = conferences_[all[j].conference].key_patterns[all[j].pattern];
                if (patterns_can_collide(pa, pb))
                    throw config_error("registry: overlapping key patterns \"" + pa.prefix +
                                       "\" (" + conferences_[all[i].conference].name + ") and \"" +
                                       pb.prefix + "\" (" + conferences_[all[j].conference].name + ")");
            }
        }

        for (const auto& ref : all) {
            const auto& pat = conferences_[ref.conference].key_patterns[ref.pattern];
            // Any key matching a prefix that spans two path segments shares its
            // stream root, so such patterns are reachable through the bucket map.
            if (auto root = stream_root(pat.prefix))
                buckets_[std::string(*root)].push_back(ref);
            else
                unbucketed_.push_back(ref);
        }
    }

    // Transparent hashing lets resolve() look buckets up by string_view,
    // keeping the per-record path allocation-free.
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<Area> areas_;
    std::vector<Conference> conferences_;
    std::unordered_map<std::string, std::size_t> area_index_;
    std::unordered_map<std::string, std::vector<PatternRef>, StringHash, std::equal_to<>> buckets_;
    std::vector<PatternRef> unbucketed_;
};

namespace detail {

// Config column order: parent,area,area_name,conference,pattern,years
// The pattern column is "prefix" or "prefix|number-prefix"; years is empty
// or "YYYY-YYYY" inclusive. Rows repeating an area may leave parent and
// area_name empty once the area has been defined by an earlier row.
inline constexpr std::string_view kConfigHeader = "parent,area,area_name,conference,pattern,years";

inline constexpr std::string_view kDefaultConfig = R"cfg(parent,area,area_name,conference,pattern,years
AI,ai,Artificial intelligence,AAAI,conf/aaai/,
AI,ai,Artificial intelligence,IJCAI,conf/ijcai/,
AI,vision,Computer vision,CVPR,conf/cvpr/,
AI,vision,Computer vision,ECCV,conf/eccv/,
AI,vision,Computer vision,ICCV,conf/iccv/,
AI,mlmining,Machine learning,ICLR,conf/iclr/,
AI,mlmining,Machine learning,ICML,conf/icml/,
AI,mlmining,Machine learning,NeurIPS,conf/nips/,
AI,nlp,Natural language processing,ACL,conf/acl/,
AI,nlp,Natural language processing,EMNLP,conf/emnlp/,
AI,nlp,Natural language processing,NAACL,conf/naacl/,
AI,inforet,The Web & information retrieval,SIGIR,conf/sigir/,
AI,inforet,The Web & information retrieval,WWW,conf/www/,
Systems,arch,Computer architecture,ASPLOS,conf/asplos/,
Systems,arch,Computer architecture,ISCA,conf/isca/,
Systems,arch,Computer architecture,MICRO,conf/micro/,
Systems,comm,Computer networks,SIGCOMM,conf/sigcomm/,
Systems,comm,Computer networks,NSDI,conf/nsdi/,
Systems,sec,Computer security,CCS,conf/ccs/,
Systems,sec,Computer security,"IEEE S&P (""Oakland"")",conf/sp/,
Systems,sec,Computer security,USENIX Security,conf/uss/,
Systems,mod,Databases,SIGMOD,conf/sigmod/,
Systems,mod,Databases,SIGMOD,journals/pacmmod/,
Systems,mod,Databases,VLDB,conf/vldb/,
Systems,mod,Databases,VLDB,journals/pvldb/,
Systems,da,Design automation,DAC,conf/dac/,
Systems,da,Design automation,ICCAD,conf/iccad/,
Systems,bed,Embedded & real-time systems,EMSOFT,conf/emsoft/,
Systems,bed,Embedded & real-time systems,RTAS,conf/rtas/,
Systems,bed,Embedded & real-time systems,RTSS,conf/rtss/,
Systems,hpc,High-performance computing,HPDC,conf/hpdc/,
Systems,hpc,High-performance computing,ICS,conf/ics/,
Systems,hpc,High-performance computing,SC,conf/sc/,
Systems,mobile,Mobile computing,MobiCom,conf/mobicom/,
Systems,mobile,Mobile computing,MobiSys,conf/mobisys/,
Systems,mobile,Mobile computing,SenSys,conf/sensys/,
Systems,metrics,Measurement & perf. analysis,IMC,conf/imc/,
Systems,metrics,Measurement & perf. analysis,SIGMETRICS,conf/sigmetrics/,
Systems,metrics,Measurement & perf. analysis,SIGMETRICS,journals/pomacs/,
Systems,ops,Operating systems,OSDI,conf/osdi/,
Systems,ops,Operating systems,SOSP,conf/sosp/,
Systems,plan,Programming languages,PLDI,conf/pldi/,
Systems,plan,Programming languages,PLDI,journals/pacmpl/|PLDI,
Systems,plan,Programming languages,POPL,conf/popl/,
Systems,plan,Programming languages,POPL,journals/pacmpl/|POPL,
Systems,soft,Software engineering,FSE,conf/sigsoft/,
Systems,soft,Software engineering,FSE,journals/pacmse/,
Systems,soft,Software engineering,ICSE,conf/icse/,
Theory,act,Algorithms & complexity,FOCS,conf/focs/,
Theory,act,Algorithms & complexity,SODA,conf/soda/,
Theory,act,Algorithms & complexity,STOC,conf/stoc/,
Theory,crypt,Cryptography,CRYPTO,conf/crypto/,
Theory,crypt,Cryptography,EuroCrypt,conf/eurocrypt/,
Theory,log,Logic & verification,CAV,conf/cav/,
Theory,log,Logic & verification,LICS,conf/lics/,
Interdisciplinary,bio,Comp. bio & bioinformatics,ISMB,conf/ismb/,
Interdisciplinary,bio,Comp. bio & bioinformatics,ISMB,journals/bioinformatics/|Supplement,
Interdisciplinary,bio,Comp. bio & bioinformatics,RECOMB,conf/recomb/,
Interdisciplinary,graph,Computer graphics,SIGGRAPH,conf/siggraph/,1974-2002
Interdisciplinary,graph,Computer graphics,SIGGRAPH,journals/tog/|4,2003-9999
Interdisciplinary,graph,Computer graphics,SIGGRAPH Asia,journals/tog/|6,2008-9999
Interdisciplinary,csed,Computer science education,SIGCSE,conf/sigcse/,
Interdisciplinary,ecom,Economics & computation,EC,conf/sigecom/,
Interdisciplinary,ecom,Economics & computation,WINE,conf/wine/,
Interdisciplinary,chi,Human-computer interaction,CHI,conf/chi/,
Interdisciplinary,chi,Human-computer interaction,UbiComp/Pervasive/IMWUT,conf/huc/,
Interdisciplinary,chi,Human-computer interaction,UbiComp/Pervasive/IMWUT,conf/pervasive/,
Interdisciplinary,chi,Human-computer interaction,UbiComp/Pervasive/IMWUT,journals/imwut/,
Interdisciplinary,chi,Human-computer interaction,UbiComp/Pervasive/IMWUT,journals/pacmhci/,
Interdisciplinary,chi,Human-computer interaction,UIST,conf/uist/,
Interdisciplinary,robotics,Robotics,ICRA,conf/icra/,
Interdisciplinary,robotics,Robotics,IROS,conf/iros/,
Interdisciplinary,robotics,Robotics,RSS,conf/rss/,
Interdisciplinary,visualization,Visualization,VIS,conf/visualization/,
Interdisciplinary,visualization,Visualization,VR,conf/vr/,
)cfg";

inline std::optional<YearRange> parse_year_range(std::string_view s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    auto dash = s.find('-');
    auto parse_year = [&](std::string_view t) -> int {
        if (t.size() != 4 || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw config_error("registry config line " + std::to_string(line) +
                               ": years must be empty or YYYY-YYYY, got \"" + std::string(s) + "\"");
        return (t[0] - '0') * 1000 + (t[1] - '0') * 100 + (t[2] - '0') * 10 + (t[3] - '0');
    };
    if (dash == std::string_view::npos)
        throw config_error("registry config line " + std::to_string(line) +
                           ": years must be empty or YYYY-YYYY, got \"" + std::string(s) + "\"");
    YearRange r{parse_year(s.substr(0, dash)), parse_year(s.substr(dash + 1))};
    if (r.first > r.last)
        throw config_error("registry config line " + std::to_string(line) + ": years range is reversed");
    return r;
}

}  // namespace detail

inline Registry Registry::from_config(std::istream& in) {
    std::vector<std::string> row;
    std::size_t line = 0;
    if (!csv::read_row(in, row, line))
        throw config_error("registry config: empty file");
    {
        std::ostringstream hdr;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) hdr << ',';
            hdr << row[i];
        }
        if (hdr.str() != detail::kConfigHeader)
            throw config_error("registry config: expected header \"" +
                               std::string(detail::kConfigHeader) + "\", got \"" + hdr.str() + "\"");
    }

    std::vector<Area> areas;
    std::vector<Conference> conferences;
    std::unordered_map<std::string, std::size_t> area_idx;     // defined areas
    std::unordered_map<std::string, std::size_t> pending;      // referenced, not yet defined
    std::unordered_map<std::string, std::size_t> conf_idx;

    while (csv::read_row(in, row, line)) {
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != 6)
            throw config_error("registry config line " + std::to_string(line) + ": expected 6 fields, got " +
                               std::to_string(row.size()));
        std::string parent_s = std::string(trim(row[0]));
        std::string abbrev = std::string(trim(row[1]));
        std::string area_name = std::string(trim(row[2]));
        std::string conf_name = std::string(trim(row[3]));
        std::string pattern_s = std::string(trim(row[4]));
        std::string years_s = std::string(trim(row[5]));

        if (abbrev.empty())
            throw config_error("registry config line " + std::to_string(line) + ": empty area abbrev");
        if (conf_name.empty() || pattern_s.empty())
            throw config_error("registry config line " + std::to_string(line) +
                               ": conference and pattern are required");

        if (!area_name.empty() || !parent_s.empty()) {
            auto parent = parse_parent_area(parent_s);
            if (!parent)
                throw config_error("registry config line " + std::to_string(line) +
                                   ": unknown parent area \"" + parent_s + "\"");
            if (area_name.empty())
                throw config_error("registry config line " + std::to_string(line) + ": missing area name");
            auto it = area_idx.find(abbrev);
            if (it != area_idx.end()) {
                const Area& prev = areas[it->second];
                if (prev.name != area_name || prev.parent != *parent)
                    throw config_error("registry config line " + std::to_string(line) +
                                       ": duplicate area abbrev \"" + abbrev + "\" with conflicting definition (was \"" +
                                       prev.name + "\"/" + std::string(to_string(prev.parent)) + ")");
            } else {
                area_idx.emplace(abbrev, areas.size());
                areas.push_back(Area{abbrev, area_name, *parent});
                pending.erase(abbrev);
            }
        } else if (!area_idx.count(abbrev)) {
            pending.emplace(abbrev, line);
        }

        KeyPattern pat;
        if (auto bar = pattern_s.find('|'); bar != std::string::npos) {
            pat.prefix = pattern_s.substr(0, bar);
            pat.number_prefix = pattern_s.substr(bar + 1);
        } else {
            pat.prefix = pattern_s;
        }
        if (pat.prefix.empty())
            throw config_error("registry config line " + std::to_string(line) + ": empty key pattern");
        pat.years = detail::parse_year_range(years_s, line);

        auto cit = conf_idx.find(conf_name);
        if (cit != conf_idx.end()) {
            Conference& conf = conferences[cit->second];
            if (conf.area != abbrev)
                throw config_error("registry config line " + std::to_string(line) + ": conference \"" +
                                   conf_name + "\" listed under two areas (\"" + conf.area + "\" and \"" +
                                   abbrev + "\")");
            conf.key_patterns.push_back(std::move(pat));
        } else {
            conf_idx.emplace(conf_name, conferences.size());
            conferences.push_back(Conference{conf_name, abbrev, {std::move(pat)}});
        }
    }

    if (!pending.empty()) {
        auto worst = *std::min_element(pending.begin(), pending.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
        throw config_error("registry config line " + std::to_string(worst.second) +
                           ": conference references unknown area \"" + worst.first + "\"");
    }
    return Registry::build(std::move(areas), std::move(conferences));
}

inline const Registry& Registry::defaults() {
    static const Registry reg = [] {
        std::istringstream in{std::string(detail::kDefaultConfig)};
        return Registry::from_config(in);
    }();
    return reg;
}

inline void Registry::write_config(std::ostream& out) const {
    out << detail::kConfigHeader << '\n';
    for (const Conference& conf : conferences_) {
        const Area* area = find_area(conf.area);
        for (const KeyPattern& pat : conf.key_patterns) {
            std::string pattern_s = pat.prefix;
            if (!pat.number_prefix.empty()) pattern_s += "|" + pat.number_prefix;
            std::string years_s;
            if (pat.years) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "%04d-%04d", pat.years->first, pat.years->last);
                years_s = buf;
            }
            csv::write_row(out, {std::string(to_string(area->parent)), area->abbrev, area->name,
                                 conf.name, pattern_s, years_s});
        }
    }
}

}  // namespace pubpoints
