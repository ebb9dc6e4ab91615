// Tabular and structured result output. Numbers are written with 17
// significant digits through std::to_chars, so text is locale independent and
// round-trips to the same double.

#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace chronon::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
    bool empty() const { return rows.empty(); }
};

std::string format_double(double v);  // scientific, 17 significant digits
std::string csv_field(const std::string& s);  // RFC 4180 quoting when needed
void write_csv(std::ostream& out, const Table& t);
// Columns as arrays keyed by name.
Json table_to_json(const Table& t);

}  // namespace chronon::cli
