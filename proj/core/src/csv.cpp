#include "rydres/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace rydres::csv {

std::string format_float(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

std::string format_int(long long x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("csv: missing column '" + name + "'");
}

namespace {

Row split(const std::string& line, char delimiter) {
    Row cells;
    std::string cell;
    for (char c : line) {
        if (c == delimiter) {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

bool is_blank(const std::string& line) {
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

}  // namespace

Table read_table(const std::string& path, char delimiter,
                 std::vector<std::string>* notes) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");

    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            if (notes)
                notes->push_back("line " + std::to_string(line_no) + ": blank line skipped");
            continue;
        }
        if (!have_header) {
            table.header = split(line, delimiter);
            have_header = true;
        } else {
            table.rows.push_back(split(line, delimiter));
        }
    }
    if (!have_header) throw std::runtime_error("csv: '" + path + "' is empty");
    return table;
}

void write_table(const std::string& path, const Row& header,
                 const std::vector<Row>& rows, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
    auto emit = [&](const Row& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.put(delimiter);
            out << row[i];
        }
        out.put('\n');
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

bool parse_double(const std::string& cell, double& out) {
    std::size_t begin = cell.find_first_not_of(" \t");
    if (begin == std::string::npos) return false;
    std::size_t end = cell.find_last_not_of(" \t") + 1;
    const char* first = cell.data() + begin;
    const char* last = cell.data() + end;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

}  // namespace rydres::csv
