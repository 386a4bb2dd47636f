#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covchain {

// One checked inequality lhs <= rhs (or identity |lhs - rhs| <= tol; the
// context says which). slack is always rhs - lhs. `hard` rows gate exit
// status; soft rows are measurements and never fail a run by magnitude.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool passed = false;
    std::string context;
    bool hard = true;
};

BoundReport make_report(std::string name, double lhs, double rhs, bool passed,
                        std::string context, bool hard = true);

// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_sig17(double v);

std::string csv_header();
std::string csv_row(const BoundReport& r);
void write_reports_csv(std::ostream& os, const std::vector<BoundReport>& rows);

} // namespace covchain
