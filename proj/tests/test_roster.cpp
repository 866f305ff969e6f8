#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "pubpoints/roster.hpp"

using namespace pubpoints;

namespace {

Roster load_str(const std::string& s) {
    std::istringstream in(s);
    return Roster::load(in);
}

const char* kHeader = "name,affiliation,homepage,scholarid\n";

}  // namespace

TEST_CASE("two rows load and group by school") {
    Roster r = load_str(std::string(kHeader) +
                        "Ann One,Example University,https://ann.example,AAA\n"
                        "Bob Two,Other Institute,,\n");
    CHECK(r.size() == 2);
    REQUIRE(r.by_school().count("Example University") == 1);
    CHECK(r.by_school().at("Example University") == std::vector<std::string>{"Ann One"});
    CHECK(r.by_school().at("Other Institute") == std::vector<std::string>{"Bob Two"});
    const FacultyRecord* ann = r.match_author("Ann One");
    REQUIRE(ann != nullptr);
    CHECK(ann->homepage == "https://ann.example");
    CHECK(ann->scholar_id == "AAA");
}

TEST_CASE("identical duplicate rows are dropped with a count") {
    Roster r = load_str(std::string(kHeader) +
                        "Ann One,Example University,h,s\n"
                        "Ann One,Example University,h,s\n");
    CHECK(r.size() == 1);
    CHECK(r.duplicate_rows_dropped() == 1);
}

TEST_CASE("same name under two affiliations is fatal and lists both") {
    CHECK_THROWS_WITH_AS(load_str(std::string(kHeader) +
                                  "Ann One,Example University,,\n"
                                  "Ann One,Different Place,,\n"),
                         doctest::Contains("Example University"), config_error);
}

TEST_CASE("quoted fields and whitespace normalization") {
    Roster r = load_str(std::string(kHeader) +
                        "\"Carol  Three\",\"University, of Commas\",,\n");
    const FacultyRecord* carol = r.match_author("Carol Three");
    REQUIRE(carol != nullptr);
    CHECK(carol->affiliation == "University, of Commas");
    // Lookup also normalizes.
    CHECK(r.match_author("  Carol   Three ") == carol);
}

TEST_CASE("match_author is exact, suffixes significant") {
    Roster r = load_str(std::string(kHeader) + "Yang Liu 0001,Example University,,\n");
    CHECK(r.match_author("Yang Liu 0001") != nullptr);
    CHECK(r.match_author("Yang Liu") == nullptr);
    CHECK(r.match_author("Nobody Here") == nullptr);
}

TEST_CASE("bad header is rejected") {
    CHECK_THROWS_AS(load_str("nom,aff,web,id\nA,B,,\n"), config_error);
}

TEST_CASE("row with wrong field count is rejected") {
    CHECK_THROWS_WITH_AS(load_str(std::string(kHeader) + "Ann One,Example University\n"),
                         doctest::Contains("line 2"), config_error);
}

TEST_CASE("load is order-insensitive up to the duplicate count") {
    std::string a = "Ann One,U1,,\n";
    std::string b = "Bob Two,U2,,\n";
    std::string c = "Cho Three,U1,,\n";
    Roster r1 = load_str(std::string(kHeader) + a + b + c);
    Roster r2 = load_str(std::string(kHeader) + c + a + b);
    CHECK(r1.size() == r2.size());
    CHECK(r1.by_school() == r2.by_school());
}
