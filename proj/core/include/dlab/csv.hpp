#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dlab::csv {

/// Column-oriented table: metadata comment lines, a mandatory header row,
/// then numeric rows.
struct Table {
    std::vector<std::string> metadata;  // emitted as "# ..." lines
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Comma-separated write through a temp file plus atomic rename, so a
/// failing run never leaves a partial file behind. Parent directories
/// are created as needed.
void write_csv(const std::filesystem::path& path, const Table& table);

}  // namespace dlab::csv
