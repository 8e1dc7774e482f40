#include "fairmask/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fairmask {

std::size_t RawTable::column_index(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw std::invalid_argument("csv: missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

std::vector<std::string> parse_csv_line(const std::string& line, std::size_t lineno) {
    std::vector<std::string> cells;
    std::string cell;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && trim(cell).empty()) {
            in_quotes = true;
            cell.clear();
        } else if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (in_quotes)
        throw std::invalid_argument("csv: unterminated quote at line " + std::to_string(lineno));
    cells.push_back(trim(cell));
    return cells;
}

bool parses_as_number(const std::string& s) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    double v;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

RawTable parse_csv(const std::string& text, const DatasetSchema& schema) {
    schema.validate();
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    // header
    if (!std::getline(in, line) || trim(line).empty())
        throw std::invalid_argument("csv: empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto file_header = parse_csv_line(line, lineno);

    // map each schema column to its file position
    std::vector<std::size_t> file_pos;
    for (const auto& [name, kind] : schema.columns) {
        auto it = std::find(file_header.begin(), file_header.end(), name);
        if (it == file_header.end())
            throw std::invalid_argument("csv: missing column '" + name + "'");
        file_pos.push_back(static_cast<std::size_t>(it - file_header.begin()));
    }

    // labels are compared textually against positive_label, so the label
    // column skips numeric validation even when declared numeric
    std::vector<bool> numeric_col(schema.columns.size(), false);
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& [name, kind] = schema.columns[c];
        numeric_col[c] = kind == ColumnKind::numeric && name != schema.label_column;
    }

    RawTable table;
    for (const auto& [name, kind] : schema.columns) table.header.push_back(name);

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = parse_csv_line(line, lineno);
        if (cells.size() != file_header.size())
            throw std::invalid_argument("csv: line " + std::to_string(lineno) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(file_header.size()));
        std::vector<std::string> row(schema.columns.size());
        bool missing = false;
        for (std::size_t c = 0; c < schema.columns.size(); ++c) {
            row[c] = cells[file_pos[c]];
            if (is_missing(row[c])) missing = true;
        }
        if (missing) {
            ++table.dropped_missing;
            continue;
        }
        for (std::size_t c = 0; c < schema.columns.size(); ++c) {
            if (numeric_col[c] && !parses_as_number(row[c]))
                throw std::invalid_argument("csv: line " + std::to_string(lineno) +
                                            ", column '" + schema.columns[c].first +
                                            "': cannot parse '" + row[c] + "' as a number");
        }
        table.rows.push_back(std::move(row));
        table.source_row_numbers.push_back(lineno);
    }
    return table;
}

RawTable load_csv(const std::string& path, const DatasetSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema);
}

}  // namespace fairmask
