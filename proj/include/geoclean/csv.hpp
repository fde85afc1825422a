#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoclean {

// RFC 4180 with the usual relaxations: LF or CRLF line ends, quoted fields may
// contain separators/newlines/escaped quotes. An empty (zero-length, unquoted)
// field is NULL; a quoted empty field "" is the empty string.
using CsvField = std::optional<std::string>;

struct CsvError : std::runtime_error {
    size_t line;
    CsvError(size_t line_, const std::string& msg)
        : std::runtime_error("csv line " + std::to_string(line_) + ": " + msg),
          line(line_) {}
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvField>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<CsvField>& fields);
void write_csv(std::ostream& out, const CsvTable& table);

} // namespace geoclean
