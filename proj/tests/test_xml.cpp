#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pubpoints/dblp_xml.hpp"

using namespace pubpoints;

namespace {

// Records every event as a flat trace for easy assertions. Adjacent text
// chunks merge, and whitespace-only text nodes (formatting between markup)
// are dropped, so traces are independent of buffer-refill chunking.
struct TraceHandler {
    std::vector<std::string> raw;

    void start_element(std::string_view name, const std::vector<xml::Attr>& attrs) {
        std::string e = "<" + std::string(name);
        for (const auto& a : attrs) e += " " + a.name + "=" + a.value;
        raw.push_back(e + ">");
    }
    void end_element(std::string_view name) { raw.push_back("</" + std::string(name) + ">"); }
    void text(std::string_view t) {
        if (!raw.empty() && raw.back().starts_with("#")) {
            raw.back().append(t);
        } else {
            raw.push_back("#" + std::string(t));
        }
    }

    std::vector<std::string> events() const {
        std::vector<std::string> out;
        for (const std::string& e : raw) {
            if (e.starts_with("#") &&
                e.find_first_not_of(" \t\r\n", 1) == std::string::npos)
                continue;
            out.push_back(e);
        }
        return out;
    }
};

std::vector<std::string> parse_str(const std::string& s, std::size_t buffer = 1 << 20) {
    std::istringstream in(s);
    TraceHandler h;
    xml::parse(in, h, buffer);
    return h.events();
}

}  // namespace

TEST_CASE("elements, attributes and text") {
    auto events = parse_str("<dblp><a key=\"k1\" x='y'>hi</a><b/></dblp>");
    CHECK(events == std::vector<std::string>{
        "<dblp>", "<a key=k1 x=y>", "#hi", "</a>", "<b>", "</b>", "</dblp>"});
}

TEST_CASE("declaration, doctype, comments, PI and CDATA are handled") {
    auto events = parse_str(
        "<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?>\n"
        "<!DOCTYPE dblp SYSTEM \"dblp.dtd\">\n"
        "<dblp><!-- note --><?pi data?><t><![CDATA[a<b&c]]></t></dblp>");
    CHECK(events == std::vector<std::string>{"<dblp>", "<t>", "#a<b&c", "</t>", "</dblp>"});
}

TEST_CASE("named entities decode to UTF-8") {
    auto events = parse_str("<d><author>Gr&ouml;pl</author></d>");
    CHECK(events[2] == "#Gr\xC3\xB6pl");

    auto events2 = parse_str("<d>&amp;&lt;&gt;&quot;&apos;&Uuml;&szlig;&eacute;</d>");
    CHECK(events2[1] == "#&<>\"'\xC3\x9C\xC3\x9F\xC3\xA9");
}

TEST_CASE("numeric character references") {
    auto events = parse_str("<d>&#233;&#x4E2D;</d>");
    CHECK(events[1] == "#\xC3\xA9\xE4\xB8\xAD");
}

TEST_CASE("unknown entity is fatal and names the entity") {
    std::istringstream in("<d>bad &nosuch; here</d>");
    TraceHandler h;
    try {
        xml::parse(in, h);
        FAIL("expected unknown_entity_error");
    } catch (const xml::unknown_entity_error& e) {
        CHECK(e.entity == "nosuch");
        CHECK(std::string(e.what()).find("nosuch") != std::string::npos);
        CHECK(e.offset == 7);  // position of '&'
    }
}

TEST_CASE("invalid numeric reference is fatal") {
    std::istringstream in("<d>&#xD800;</d>");
    TraceHandler h;
    CHECK_THROWS_AS(xml::parse(in, h), xml::parse_error);
}

TEST_CASE("unbalanced tags fail with a byte offset") {
    SUBCASE("mismatched end tag") {
        std::istringstream in("<dblp><a></b></dblp>");
        TraceHandler h;
        try {
            xml::parse(in, h);
            FAIL("expected parse_error");
        } catch (const xml::parse_error& e) {
            CHECK(e.offset == 9);  // position of "</b>"
            CHECK(std::string(e.what()).find("byte 9") != std::string::npos);
        }
    }
    SUBCASE("unclosed element at EOF") {
        std::istringstream in("<dblp><a>text");
        TraceHandler h;
        CHECK_THROWS_AS(xml::parse(in, h), xml::parse_error);
    }
    SUBCASE("stray end tag") {
        std::istringstream in("<dblp></dblp></x>");
        TraceHandler h;
        CHECK_THROWS_AS(xml::parse(in, h), xml::parse_error);
    }
    SUBCASE("second root element") {
        std::istringstream in("<a></a><b></b>");
        TraceHandler h;
        CHECK_THROWS_AS(xml::parse(in, h), xml::parse_error);
    }
}

TEST_CASE("empty input has no root") {
    std::istringstream in("   ");
    TraceHandler h;
    CHECK_THROWS_AS(xml::parse(in, h), xml::parse_error);
}

TEST_CASE("mutated documents either parse or fail cleanly") {
    // Byte-level mutations must never hang or crash the parser: every input
    // either produces events or throws a positioned parse error.
    std::string base =
        "<?xml version=\"1.0\"?><dblp>"
        "<inproceedings key=\"conf/iclr/A23\"><author>Ann &Ouml;ne</author>"
        "<title>On <i>k</i>-means.</title><year>2023</year></inproceedings>"
        "<article key=\"journals/pacmpl/B20\"><author>Bob</author>"
        "<number>POPL</number><year>2020</year></article></dblp>";
    std::mt19937 rng(42);
    const std::string alphabet = "<>&;/\"'=! abckey0123";
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::string doc = base;
        int edits = 1 + int(rng() % 4);
        for (int e = 0; e < edits; ++e) {
            std::size_t pos = rng() % doc.size();
            switch (rng() % 3) {
                case 0: doc[pos] = alphabet[rng() % alphabet.size()]; break;
                case 1: doc.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
                case 2: doc.erase(pos, 1); break;
            }
        }
        std::istringstream in(doc);
        TraceHandler h;
        try {
            xml::parse(in, h, 16);
            ++parsed;
        } catch (const xml::parse_error&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 300);
    CHECK(rejected > 0);   // mutations do get caught
}

TEST_CASE("events are identical across buffer sizes") {
    // Tiny buffers force every construct across refill boundaries.
    std::string doc =
        "<?xml version=\"1.0\"?><dblp><!-- comment longer than tiny buffers -->"
        "<article key=\"journals/x/Y21\"><author>A&ouml; B</author>"
        "<title>On <i>k</i>-means &amp; more</title><year>2021</year></article>"
        "<t><![CDATA[raw ]] > data]]></t></dblp>";
    auto reference = parse_str(doc);
    for (std::size_t buf : {4, 7, 16, 64, 4096}) {
        auto events = parse_str(doc, buf);
        CHECK(events == reference);
    }
}
