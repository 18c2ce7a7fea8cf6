#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace xxz::cli {

using ojson = nlohmann::ordered_json;

// A report is a metadata object plus an optional table. JSON output nests
// the table under `table_name`, or merges a single row into the top level
// when `table_name` is empty; CSV output is the table alone.
struct Report {
    ojson meta = ojson::object();
    std::string table_name;
    std::vector<ojson> rows;  // each an object with the same keys in the same order
};

// Numbers are written with 17 significant digits; non-finite values become null.
void write_json(std::ostream& os, const ojson& value, int indent = 2);
void write_report_json(std::ostream& os, const Report& report);
void write_report_csv(std::ostream& os, const Report& report);

std::string format_number(double x);

} // namespace xxz::cli
