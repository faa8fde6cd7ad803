#include "polarlens/common.hpp"
#include "polarlens/csv.hpp"

#include "doctest.h"

#include <sstream>

using namespace polarlens;

TEST_CASE("timestamps parse strictly and round-trip") {
    auto ts = parse_timestamp("2022-05-24T23:59:59Z");
    REQUIRE(ts);
    CHECK(format_timestamp(*ts) == "2022-05-24T23:59:59Z");
    CHECK(format_date(day_of(*ts)) == "2022-05-24");

    auto frac = parse_timestamp("2022-05-24T10:00:00.987Z");
    REQUIRE(frac);
    CHECK(format_timestamp(*frac) == "2022-05-24T10:00:00Z");

    CHECK_FALSE(parse_timestamp(""));
    CHECK_FALSE(parse_timestamp("2022-05-24 10:00:00"));
    CHECK_FALSE(parse_timestamp("2022-05-24T10:00:00"));
    CHECK_FALSE(parse_timestamp("2022-13-01T00:00:00Z"));
    CHECK_FALSE(parse_timestamp("2022-02-30T00:00:00Z"));
    CHECK_FALSE(parse_timestamp("2022-05-24T24:00:00Z"));
    CHECK_FALSE(parse_timestamp("2022-05-24T10:00:00Zjunk"));
}

TEST_CASE("dates") {
    auto d = parse_date("2020-02-29");
    REQUIRE(d);
    CHECK(format_date(*d) == "2020-02-29");
    CHECK_FALSE(parse_date("2021-02-29"));
    CHECK_FALSE(parse_date("2021-2-1"));
}

TEST_CASE("stance and direction tokens") {
    CHECK(to_string(Stance::pro) == "pro");
    CHECK(parse_stance("anti") == Stance::anti);
    CHECK(parse_stance("undecided") == Stance::undecided);
    CHECK_FALSE(parse_stance("Pro"));

    Direction d{Stance::anti, Stance::pro};
    CHECK(to_string(d) == "anti->pro");
    CHECK(parse_direction("anti->pro") == d);
    CHECK_FALSE(parse_direction("anti-pro"));
    CHECK_FALSE(parse_direction("->pro"));
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, -0.5, 0.1, 1.0 / 3.0, 1e-300, 123456.789}) {
        auto s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("csv quoting") {
    CHECK(csv::split_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(csv::split_line("\"a,b\",\"say \"\"hi\"\"\",") == std::vector<std::string>{"a,b", "say \"hi\"", ""});
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("q\"") == "\"q\"\"\"");
    CHECK_THROWS_AS(csv::split_line("\"open"), ParseError);
}

TEST_CASE("csv tables check headers and widths") {
    std::istringstream ok("x,y\n1,2\n\n3,4\n");
    auto rows = csv::read_table(ok, {"x", "y"});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "3");

    std::istringstream bad_header("x,z\n1,2\n");
    CHECK_THROWS_AS(csv::read_table(bad_header, {"x", "y"}), ParseError);

    std::istringstream ragged("x,y\n1\n");
    CHECK_THROWS_AS(csv::read_table(ragged, {"x", "y"}), ParseError);

    std::ostringstream out;
    csv::write_row(out, {"a", "b,c"});
    CHECK(out.str() == "a,\"b,c\"\n");
}
