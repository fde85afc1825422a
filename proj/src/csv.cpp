#include "geoclean/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace geoclean {

namespace {

// one record, possibly spanning multiple physical lines inside quotes.
// returns false on clean EOF before any character of a new record.
bool read_record(std::istream& in, size_t& line, std::vector<CsvField>& out,
                 bool& saw_quotes) {
    out.clear();
    saw_quotes = false;
    int c = in.get();
    if (c == EOF) return false;

    std::string field;
    bool quoted = false;       // currently inside quotes
    bool field_was_quoted = false;
    auto push_field = [&] {
        if (field.empty() && !field_was_quoted)
            out.push_back(std::nullopt); // empty unquoted field = NULL
        else
            out.push_back(field);
        field.clear();
        field_was_quoted = false;
    };

    while (true) {
        if (quoted) {
            if (c == EOF) throw CsvError(line, "unterminated quoted field");
            if (c == '"') {
                int d = in.peek();
                if (d == '"') { field.push_back('"'); in.get(); }
                else quoted = false;
            } else {
                if (c == '\n') ++line;
                field.push_back(static_cast<char>(c));
            }
        } else {
            // crlf collapses to lf only when the cr is outside quotes
            if (c == '\r' && in.peek() == '\n') c = in.get();
            if (c == EOF || c == '\n') {
                push_field();
                if (c == '\n') ++line;
                return true;
            }
            if (c == ',') {
                push_field();
            } else if (c == '"') {
                if (!field.empty())
                    throw CsvError(line, "quote inside unquoted field");
                quoted = true;
                field_was_quoted = true;
                saw_quotes = true;
            } else {
                field.push_back(static_cast<char>(c));
            }
        }
        c = in.get();
    }
}

} // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    size_t line = 1;
    std::vector<CsvField> rec;
    bool saw_quotes = false;
    if (!read_record(in, line, rec, saw_quotes))
        throw CsvError(1, "empty input, header row required");
    for (auto& f : rec)
        table.header.push_back(f.value_or(""));
    while (true) {
        size_t at = line;
        if (!read_record(in, line, rec, saw_quotes)) break;
        if (rec.size() == 1 && !rec[0].has_value() && in.peek() == EOF)
            break; // trailing newline at EOF
        if (rec.size() != table.header.size())
            throw CsvError(at, "expected " + std::to_string(table.header.size()) +
                                   " fields, got " + std::to_string(rec.size()));
        table.rows.push_back(std::move(rec));
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

std::string csv_escape(const std::string& field) {
    bool need = field.empty(); // empty string must be quoted to stay non-NULL
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') { need = true; break; }
    if (!need) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<CsvField>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        if (fields[i]) out << csv_escape(*fields[i]);
    }
    out << '\n';
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(table.header[i]);
    }
    out << '\n';
    for (const auto& row : table.rows)
        write_csv_row(out, row);
}

} // namespace geoclean
