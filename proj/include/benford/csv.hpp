#ifndef BENFORD_CSV_HPP
#define BENFORD_CSV_HPP

#include <string>
#include <vector>

namespace benford {

/// A parsed CSV file: header row plus data rows, all cells as raw strings.
/// Quoted fields (RFC 4180, "" escapes), CRLF and LF line ends accepted.
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows; // each padded/ragged as in file

    /// Index of a header column, -1 when absent.
    int column(const std::string& name) const;
};

/// Reads and tokenizes a CSV file. Throws ParseError (with location) on
/// unterminated quotes; missing files throw ValidationError.
CsvTable read_csv(const std::string& path);

/// Parses CSV from an in-memory string (for round-trip tests).
CsvTable parse_csv_text(const std::string& text, const std::string& name = "<memory>");

/// Quotes a cell for output. Entity names are always quoted (uniform style);
/// set `always` false to quote only when required.
std::string csv_quote(const std::string& cell, bool always = true);

} // namespace benford

#endif // BENFORD_CSV_HPP
