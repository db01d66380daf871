#include <catch2/catch.hpp>

#include <sstream>

#include "simband/errors.hpp"
#include "simband/series.hpp"

using namespace simband;

namespace {

CsvLoadResult load_text(const std::string& text, const std::string& date_column = "date",
                        std::vector<std::string> columns = {}) {
    std::istringstream in(text);
    return load_csv_stream(in, "test", date_column, std::move(columns));
}

} // namespace

TEST_CASE("Date parsing") {
    REQUIRE(Date::parse("2020-04-07").has_value());
    REQUIRE(Date::parse("2020-04-07")->to_string() == "2020-04-07");
    REQUIRE(Date::parse("2020-02-29").has_value());  // leap year
    REQUIRE_FALSE(Date::parse("2021-02-29").has_value());
    REQUIRE_FALSE(Date::parse("2020-13-01").has_value());
    REQUIRE_FALSE(Date::parse("2020-00-10").has_value());
    REQUIRE_FALSE(Date::parse("20200407").has_value());
    REQUIRE_FALSE(Date::parse("not-a-date").has_value());
    REQUIRE(Date{2020, 12, 31}.next_day() == Date{2021, 1, 1});
    REQUIRE(Date{2020, 2, 28}.next_day() == Date{2020, 2, 29});
}

TEST_CASE("load_csv basics") {
    SECTION("identity ingestion") {
        const auto r = load_text("date,AAPL\n2020-01-01,1\n2020-01-02,2\n2020-01-03,3\n");
        REQUIRE(r.series.size() == 1);
        REQUIRE(r.series[0].name == "AAPL");
        REQUIRE(r.series[0].size() == 3);
        REQUIRE(r.series[0].values == std::vector<double>{1.0, 2.0, 3.0});
        REQUIRE(r.dropped_rows == 0);
    }
    SECTION("blank cell drops the row and is counted") {
        const auto r = load_text(
            "date,AAPL\n2020-01-01,1\n2020-01-02,\n2020-01-03,3\n2020-01-04,4\n");
        REQUIRE(r.series[0].size() == 3);
        REQUIRE(r.dropped_rows == 1);
    }
    SECTION("repeated date is an error") {
        REQUIRE_THROWS_AS(load_text("date,AAPL\n2020-01-01,1\n2020-01-01,2\n"), data_error);
    }
    SECTION("output is chronologically sorted") {
        const auto r = load_text("date,AAPL\n2020-01-03,3\n2020-01-01,1\n2020-01-02,2\n");
        REQUIRE(r.series[0].values == std::vector<double>{1.0, 2.0, 3.0});
        REQUIRE(r.series[0].timestamps.front() < r.series[0].timestamps.back());
    }
    SECTION("missing column is an error") {
        REQUIRE_THROWS_AS(load_text("date,AAPL\n2020-01-01,1\n", "date", {"MSFT"}),
                          data_error);
    }
    SECTION("zero usable rows is an error") {
        REQUIRE_THROWS_AS(load_text("date,AAPL\n2020-01-01,\n"), data_error);
        REQUIRE_THROWS_AS(load_text("date,AAPL\n"), data_error);
    }
    SECTION("missing file is an error") {
        REQUIRE_THROWS_AS(load_csv("/nonexistent/file.csv", "date", {}), data_error);
    }
    SECTION("non-finite cells are treated as unparseable") {
        const auto r = load_text("date,AAPL\n2020-01-01,1\n2020-01-02,nan\n2020-01-03,3\n");
        REQUIRE(r.series[0].size() == 2);
        REQUIRE(r.dropped_rows == 1);
    }
    SECTION("unparseable date drops the row") {
        const auto r = load_text("date,AAPL\n2020-01-01,1\nbogus,2\n2020-01-03,3\n");
        REQUIRE(r.series[0].size() == 2);
        REQUIRE(r.dropped_rows == 1);
    }
    SECTION("several requested columns share the row filter") {
        const auto r = load_text("date,A,B\n2020-01-01,1,10\n2020-01-02,2,\n2020-01-03,3,30\n",
                                 "date", {"A", "B"});
        REQUIRE(r.series.size() == 2);
        REQUIRE(r.series[0].values == std::vector<double>{1.0, 3.0});
        REQUIRE(r.series[1].values == std::vector<double>{10.0, 30.0});
        REQUIRE(r.dropped_rows == 1);
    }
    SECTION("empty column list selects every non-date column") {
        const auto r = load_text("date,A,B\n2020-01-01,1,10\n");
        REQUIRE(r.series.size() == 2);
        REQUIRE(r.series[0].name == "A");
        REQUIRE(r.series[1].name == "B");
    }
}
