#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace refracto::io {

/// Numeric CSV with an optional single header row and '#' comment lines.
struct CsvTable {
    std::vector<std::string> header; ///< empty when the file has no header
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Reads a rectangular numeric CSV. A first row that fails to parse as
/// numbers is taken as the header. Throws ParseError (with line numbers)
/// for ragged rows or non-numeric data cells, IoError on open failure.
CsvTable read_csv(const std::filesystem::path& path);

} // namespace refracto::io
