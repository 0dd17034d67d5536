#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace kljn {

/// What produced a report. Written as '# key=value' lines ahead of every table.
struct RunManifest {
    std::string command;
    std::string input;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::vector<std::pair<std::string, std::string>> params;

    void add(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
};

/// Comma-separated table with a header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);
    std::size_t rows() const { return rows_.size(); }

    std::string render(const RunManifest& manifest) const;
    void write(const std::filesystem::path& path, const RunManifest& manifest) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

/// Shortest round-trip decimal form.
std::string num(double v);

}  // namespace kljn
