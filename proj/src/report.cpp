#include "covchain/report.hpp"

#include <cstdio>
#include <ostream>

namespace covchain {

BoundReport make_report(std::string name, double lhs, double rhs, bool passed,
                        std::string context, bool hard) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.passed = passed;
    r.context = std::move(context);
    r.hard = hard;
    return r;
}

std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_header() { return "name,lhs,rhs,slack,passed,context"; }

namespace {

std::string csv_quote(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string csv_row(const BoundReport& r) {
    std::string out = csv_quote(r.name);
    out += ',';
    out += format_sig17(r.lhs);
    out += ',';
    out += format_sig17(r.rhs);
    out += ',';
    out += format_sig17(r.slack);
    out += ',';
    out += r.passed ? "true" : "false";
    out += ',';
    out += csv_quote(r.context);
    return out;
}

void write_reports_csv(std::ostream& os, const std::vector<BoundReport>& rows) {
    os << csv_header() << '\n';
    for (const auto& r : rows) os << csv_row(r) << '\n';
}

} // namespace covchain
