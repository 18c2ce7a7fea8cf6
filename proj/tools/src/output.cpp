#include "xxz/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace xxz::cli {

std::string format_number(double x)
{
    if (!std::isfinite(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void dump(std::ostream& os, const ojson& v, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (v.type()) {
    case ojson::value_t::number_float: {
        const double x = v.get<double>();
        os << (std::isfinite(x) ? format_number(x) : "null");
        return;
    }
    case ojson::value_t::object: {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [key, item] : v.items()) {
            if (!first) os << ",\n";
            first = false;
            os << pad << ojson(key).dump() << ": ";
            dump(os, item, indent, depth + 1);
        }
        os << "\n" << close << "}";
        return;
    }
    case ojson::value_t::array: {
        if (v.empty()) {
            os << "[]";
            return;
        }
        os << "[\n";
        bool first = true;
        for (const auto& item : v) {
            if (!first) os << ",\n";
            first = false;
            os << pad;
            dump(os, item, indent, depth + 1);
        }
        os << "\n" << close << "]";
        return;
    }
    default:
        os << v.dump();
    }
}

std::string csv_cell(const ojson& v)
{
    switch (v.type()) {
    case ojson::value_t::number_float: return format_number(v.get<double>());
    case ojson::value_t::string: {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    case ojson::value_t::null: return "";
    case ojson::value_t::array:
    case ojson::value_t::object: return csv_cell(ojson(v.dump()));
    default: return v.dump();
    }
}

} // namespace

void write_json(std::ostream& os, const ojson& value, int indent)
{
    dump(os, value, indent, 0);
    os << "\n";
}

void write_report_json(std::ostream& os, const Report& report)
{
    ojson doc = ojson::object();
    if (report.table_name.empty()) {
        for (const auto& row : report.rows)
            for (const auto& [key, item] : row.items()) doc[key] = item;
        for (const auto& [key, item] : report.meta.items()) doc[key] = item;
    } else {
        doc = report.meta;
        doc[report.table_name] = ojson::array();
        for (const auto& row : report.rows) doc[report.table_name].push_back(row);
    }
    write_json(os, doc);
}

void write_report_csv(std::ostream& os, const Report& report)
{
    if (report.rows.empty()) {
        // no table: the metadata becomes a single row
        Report single;
        single.rows.push_back(report.meta);
        if (!report.meta.empty()) write_report_csv(os, single);
        return;
    }
    bool first = true;
    for (const auto& [key, item] : report.rows.front().items()) {
        os << (first ? "" : ",") << csv_cell(ojson(key));
        first = false;
    }
    os << "\n";
    for (const auto& row : report.rows) {
        first = true;
        for (const auto& [key, item] : row.items()) {
            os << (first ? "" : ",") << csv_cell(item);
            first = false;
        }
        os << "\n";
    }
}

} // namespace xxz::cli
