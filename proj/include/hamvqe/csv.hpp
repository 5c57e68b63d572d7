#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hamvqe {

/// Shortest text that round-trips a double, at most 17 significant digits.
std::string format_double(double value);

/// Comma-separated row terminated by a newline.
void write_row(std::ostream &out, const std::vector<std::string> &cells);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::ptrdiff_t column(const std::string &name) const;
};

CsvTable read_csv(std::istream &in);

/// key=value lines in key order.
void write_manifest(std::ostream &out, const std::map<std::string, std::string> &entries);

} // namespace hamvqe
