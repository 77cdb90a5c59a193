#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace covertsim {

/// Shortest decimal representation that parses back to the same double.
/// Infinities are written as "inf" / "-inf".
std::string format_double(double x);

/// Accumulates CSV text; every file starts with its header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    CsvTable& row(const std::vector<std::string>& cells);
    std::string str() const;
    void write(const std::filesystem::path& path) const;
    std::size_t rows() const { return rows_; }

private:
    std::size_t width_;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Git blob object id (SHA-1 over "blob <len>\0<content>") as lowercase hex.
std::string git_blob_hash(const std::string& content);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace covertsim
