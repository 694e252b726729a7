#include "dlab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "dlab/errors.hpp"

namespace dlab::csv {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{})
        throw Error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const Table& table) {
    if (table.header.empty())
        throw ConfigError("write_csv: header row is mandatory");
    for (const auto& row : table.rows)
        if (row.size() != table.header.size())
            throw ConfigError("write_csv: row width differs from header width");

    const auto parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("write_csv: cannot open " + tmp);
        for (const auto& m : table.metadata) os << "# " << m << '\n';
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (i) os << ',';
            os << table.header[i];
        }
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                os << format_double(row[i]);
            }
            os << '\n';
        }
        os.flush();
        if (!os) throw Error("write_csv: write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("write_csv: rename failed: " + ec.message());
    }
}

}  // namespace dlab::csv
