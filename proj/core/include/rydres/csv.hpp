#pragma once

#include <string>
#include <vector>

namespace rydres::csv {

/// Scientific notation with 17 significant digits; round-trips any double
/// bit-exactly and is locale-independent.
std::string format_float(double x);

/// Integer column cell.
std::string format_int(long long x);

/// One parsed row of a delimited file.
using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;

    /// Index of a named column; throws std::runtime_error when absent.
    std::size_t column(const std::string& name) const;
};

/// Reads a delimited UTF-8 file with a mandatory header row. Blank lines are
/// skipped; when `notes` is given, each skip is recorded with its line
/// number. Throws std::runtime_error on missing file or empty content.
Table read_table(const std::string& path, char delimiter = ',',
                 std::vector<std::string>* notes = nullptr);

/// Writes header + rows as delimited text, one trailing newline per row.
void write_table(const std::string& path, const Row& header,
                 const std::vector<Row>& rows, char delimiter = ',');

/// Parses a decimal-point real; returns false on any trailing garbage.
bool parse_double(const std::string& cell, double& out);

}  // namespace rydres::csv
