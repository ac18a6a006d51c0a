#include "benford/csv.hpp"

#include <fstream>
#include <sstream>

#include "benford/errors.hpp"

namespace benford {

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return int(i);
    return -1;
}

namespace {

// Single-pass tokenizer. Rows and columns are 1-based in error messages.
CsvTable tokenize(const std::string& text, const std::string& name) {
    CsvTable table;
    table.path = name;

    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool row_has_content = false; // distinguishes "" from a file ending in \n
    size_t line = 1;

    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
    };
    auto end_row = [&] {
        end_cell();
        if (table.header.empty())
            table.header = std::move(row);
        else
            table.rows.push_back(std::move(row));
        row.clear();
        row_has_content = false;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                end_cell();
                row_has_content = true;
                break;
            case '\r':
                break; // CRLF: defer to the \n
            case '\n':
                end_row();
                ++line;
                break;
            default:
                cell += c;
                row_has_content = true;
        }
    }
    if (in_quotes)
        throw ParseError(name + ": unterminated quoted field starting before line " +
                         std::to_string(line));
    if (row_has_content || !row.empty() || !cell.empty()) end_row();
    return table;
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return tokenize(buf.str(), path);
}

CsvTable parse_csv_text(const std::string& text, const std::string& name) {
    return tokenize(text, name);
}

std::string csv_quote(const std::string& cell, bool always) {
    bool need = always || cell.find_first_of(",\"\r\n") != std::string::npos;
    if (!need) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace benford
