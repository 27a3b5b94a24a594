#include "aniso/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aniso {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
    for (std::size_t j = 0; j < header.size(); ++j)
        out << header[j] << (j + 1 < header.size() ? "," : "\n");
    std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < columns.size(); ++j)
            out << fmt17(columns[j][i]) << (j + 1 < columns.size() ? "," : "\n");
}

const std::vector<double>& CsvTable::col(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == name) return columns[j];
    throw std::runtime_error("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw std::runtime_error("read_csv: empty file " + path.string());

    CsvTable t;
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    if (t.header.empty()) throw std::runtime_error("read_csv: missing header");
    t.columns.resize(t.header.size());

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t j = 0;
        while (std::getline(ls, cell, ',')) {
            if (j >= t.header.size())
                throw std::runtime_error("read_csv: too many fields on line " +
                                         std::to_string(lineno));
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw std::runtime_error("read_csv: bad number on line " + std::to_string(lineno));
            }
            if (used != cell.size())
                throw std::runtime_error("read_csv: bad number on line " + std::to_string(lineno));
            t.columns[j++].push_back(v);
        }
        if (j != t.header.size())
            throw std::runtime_error("read_csv: short row on line " + std::to_string(lineno));
    }
    if (t.columns[0].empty()) throw std::runtime_error("read_csv: no data rows");
    return t;
}

}  // namespace aniso
