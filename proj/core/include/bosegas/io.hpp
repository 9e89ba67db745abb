#ifndef BOSEGAS_IO_HPP
#define BOSEGAS_IO_HPP

#include "bosegas/grid.hpp"
#include "bosegas/rng.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace bosegas::io {

inline constexpr int format_version = 1;

// All writers go through a temp file in the target directory plus rename, so
// readers never observe a half-written file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& value);

std::string read_text(const std::filesystem::path& path);
// Throws CorruptHeader when the file is missing or not valid JSON.
nlohmann::json read_json(const std::filesystem::path& path);

struct FieldMeta {
    std::string units = "1";
    nlohmann::json spec;  // free-form provenance (disorder descriptor, solver stats)
    Seed seed;
};

// Writes <stem>.bin (row-major float64, native little-endian) plus a
// <stem>.json sidecar describing grid, units, seed, and spec.
void save_field(const Field& field, const std::filesystem::path& stem, const FieldMeta& meta);

struct LoadedField {
    Field field;
    FieldMeta meta;
    nlohmann::json sidecar;
};

// Round-trips save_field byte-exactly. A sidecar with missing keys or a
// payload shorter than shape implies throws CorruptHeader before any value
// is returned; a different format-version throws VersionMismatch.
LoadedField load_field(const std::filesystem::path& stem);

// Buffered CSV writer; doubles are printed with 17 significant digits so a
// reread reproduces the bit pattern. close() performs the atomic rename.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, std::vector<std::string> columns);
    ~CsvWriter();

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);
    void close();

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    std::size_t columns_ = 0;
    bool closed_ = false;
};

std::string format_double(double value);

} // namespace bosegas::io

#endif
