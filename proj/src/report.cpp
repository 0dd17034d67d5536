#include "kljn/report.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace kljn {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) {
        throw std::invalid_argument(
            fmt::format("row has {} fields, header has {}", row.size(), header_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string CsvTable::render(const RunManifest& manifest) const {
    std::string out;
    out += fmt::format("# command={}\n", manifest.command);
    if (!manifest.input.empty()) out += fmt::format("# input={}\n", manifest.input);
    out += fmt::format("# seed={}\n", manifest.seed);
    for (const auto& [k, v] : manifest.params) out += fmt::format("# {}={}\n", k, v);

    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (k) out += ',';
            out += csv_escape(fields[k]);
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void CsvTable::write(const std::filesystem::path& path, const RunManifest& manifest) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    f << render(manifest);
}

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace kljn
