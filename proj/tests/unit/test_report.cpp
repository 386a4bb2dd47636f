#include "covchain/report.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

using namespace covchain;

TEST_CASE("make_report fills the slack") {
    const BoundReport r = make_report("demo", 1.5, 4.0, true, "ctx", false);
    CHECK(r.slack == 2.5);
    CHECK_FALSE(r.hard);
    CHECK(r.passed);
}

TEST_CASE("format_sig17 round-trips doubles") {
    for (double v : {1.0 / 3.0, 0.1, 123456.789, -2.5e-300, 0.0}) {
        CHECK(std::stod(format_sig17(v)) == v);
    }
}

TEST_CASE("csv rows quote embedded separators") {
    BoundReport r = make_report("name,with comma", 1.0, 2.0, true, "says \"hi\"\nbye");
    const std::string row = csv_row(r);
    CHECK(row.substr(0, 17) == "\"name,with comma\"");
    CHECK(row.find("\"says \"\"hi\"\"\nbye\"") != std::string::npos);

    std::ostringstream os;
    write_reports_csv(os, {r});
    CHECK(os.str().substr(0, 33) == "name,lhs,rhs,slack,passed,context");
}
