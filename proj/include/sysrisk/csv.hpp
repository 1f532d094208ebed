#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sysrisk {

/// Numeric CSV: one header line, then rows of doubles. Written with LF line
/// endings and 17 significant digits so that values round-trip exactly.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

std::string format_double(double v);

std::string to_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace sysrisk
