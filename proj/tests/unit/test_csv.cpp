#include <doctest.h>

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using namespace evdemand;

namespace {

std::vector<std::vector<std::string>> read_all(const std::string& text) {
    std::istringstream in(text);
    CsvReader r(in);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> fields;
    while (r.next(fields)) rows.push_back(fields);
    return rows;
}

} // namespace

TEST_CASE("csv reader: plain, quoted, escaped, crlf") {
    auto rows = read_all("a,b,c\r\n1,\"x,y\",\"he said \"\"hi\"\"\"\n,,\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
    CHECK(rows[1] == std::vector<std::string>{"1", "x,y", "he said \"hi\""});
    CHECK(rows[2] == std::vector<std::string>{"", "", ""});
}

TEST_CASE("csv reader: quoted field spanning a newline") {
    auto rows = read_all("\"a\nb\",2\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == std::vector<std::string>{"a\nb", "2"});
}

TEST_CASE("csv reader: unterminated quote throws") {
    std::istringstream in("\"oops,1\n");
    CsvReader r(in);
    std::vector<std::string> fields;
    CHECK_THROWS_AS(r.next(fields), DataError);
}

TEST_CASE("csv writer round-trips awkward fields") {
    std::ostringstream out;
    CsvWriter w(out);
    std::vector<std::string> fields = {"plain", "with,comma", "with\"quote", "multi\nline", ""};
    w.row(fields);
    auto rows = read_all(out.str());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == fields);
}

TEST_CASE("format_double is shortest and round-trips exactly") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(13.4448) == "13.4448");
    CHECK(format_double(-83.7537) == "-83.7537");
    CHECK(format_double(0.0) == "0");
    const double vals[] = {1.0 / 3.0, 1e-300, 9.007199254740993e15, 42.2776};
    for (double v : vals) {
        auto back = parse_double(format_double(v));
        REQUIRE(back.has_value());
        CHECK(*back == v);
    }
}

TEST_CASE("strict numeric parsing") {
    CHECK(parse_double("1.5") == 1.5);
    CHECK(parse_double("-2e3") == -2000.0);
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK_FALSE(parse_double("").has_value());
    CHECK_FALSE(parse_double(" 1").has_value());
    CHECK(parse_int("12") == 12);
    CHECK(parse_int("-7") == -7);
    CHECK_FALSE(parse_int("12.5").has_value());
    CHECK_FALSE(parse_int("").has_value());
}

TEST_CASE("file io round-trip") {
    const std::string path = "evdemand_csv_test.tmp";
    const std::string content = "line1\nline2,with,commas\n";
    write_file(path, content);
    CHECK(read_file(path) == content);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file("definitely/not/a/real/path.csv"), ConfigError);
}
