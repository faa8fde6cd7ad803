#include "polarlens/csv.hpp"

#include "polarlens/common.hpp"

#include <fmt/format.h>
#include <istream>
#include <ostream>

namespace polarlens::csv {

std::vector<std::string> split_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field");
    fields.push_back(std::move(current));
    return fields;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::vector<std::string>> read_table(std::istream& in,
                                                 const std::vector<std::string>& expected_header) {
    std::string line;
    bool have_header = false;
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (!have_header) {
            if (fields != expected_header)
                throw ParseError(fmt::format("unexpected CSV header '{}', expected '{}'", line,
                                             fmt::join(expected_header, ",")));
            have_header = true;
            continue;
        }
        if (fields.size() != expected_header.size())
            throw ParseError(fmt::format("CSV line {}: expected {} fields, got {}", line_no,
                                         expected_header.size(), fields.size()));
        rows.push_back(std::move(fields));
    }
    if (!have_header) throw ParseError("CSV input has no header row");
    return rows;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

} // namespace polarlens::csv
