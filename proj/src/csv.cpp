#include "hamvqe/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "hamvqe/error.hpp"

namespace hamvqe {

std::string format_double(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) {
        throw NumericalError("cannot format value");
    }
    return std::string(buf, end);
}

void write_row(std::ostream &out, const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << cells[i];
    }
    out << '\n';
}

std::ptrdiff_t CsvTable::column(const std::string &name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return static_cast<std::ptrdiff_t>(i);
        }
    }
    return -1;
}

CsvTable read_csv(std::istream &in) {
    CsvTable table;
    std::string line;
    auto split = [](const std::string &s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (!s.empty() && s.back() == ',') {
            cells.emplace_back();
        }
        return cells;
    };
    if (!std::getline(in, line)) {
        throw SchemaError("CSV is empty");
    }
    table.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw SchemaError("CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                              " cells, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

void write_manifest(std::ostream &out, const std::map<std::string, std::string> &entries) {
    for (const auto &[k, v] : entries) {
        out << k << '=' << v << '\n';
    }
}

} // namespace hamvqe
