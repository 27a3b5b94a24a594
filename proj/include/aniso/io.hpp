// Deterministic CSV output (17 significant digits) and parsing for verify.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace aniso {

std::string fmt17(double v);

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& col(const std::string& name) const;
};

// Throws std::runtime_error on missing files or malformed content.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace aniso
