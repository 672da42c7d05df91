#include "daleel/csv.hpp"

#include "daleel/error.hpp"

#include <charconv>
#include <fstream>

namespace daleel::csv {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

Rows read_table(const std::filesystem::path& path, const std::string& expected_header,
                const std::string& module) {
    std::ifstream in(path);
    if (!in) throw Error(module, "cannot open file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error(module, "empty file: " + path.string());

    std::string header;
    for (const auto& cell : split_row(line)) {
        if (!header.empty()) header += ',';
        header += cell;
    }
    if (header != expected_header)
        throw Error(module, "unexpected header '" + header + "', expected '" + expected_header + "'");

    Rows rows;
    const std::size_t ncols = split_row(expected_header).size();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != ncols)
            throw Error(module, "row " + std::to_string(lineno) + ": expected " +
                                    std::to_string(ncols) + " fields, got " +
                                    std::to_string(cells.size()));
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell, const std::string& module, const std::string& where) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw Error(module, where + ": not a number: '" + cell + "'");
    return v;
}

int parse_int(const std::string& cell, const std::string& module, const std::string& where) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw Error(module, where + ": not an integer: '" + cell + "'");
    return v;
}

} // namespace daleel::csv
