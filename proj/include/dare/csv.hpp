#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dare {

// Minimal RFC-4180 CSV support: quoted fields, embedded commas / quotes /
// newlines, and CRLF line endings. Enough for label files and link tables;
// not a general-purpose parser.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; throws BadCsvError if absent.
    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace dare
