#include "bosegas/io.hpp"

#include "bosegas/errors.hpp"

#include <bit>
#include <cstdio>
#include <system_error>

static_assert(std::endian::native == std::endian::little,
              "field dumps are defined as little-endian float64");
static_assert(sizeof(double) == 8);

namespace bosegas::io {

namespace {

std::filesystem::path tmp_name(const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    return tmp;
}

void rename_over(const std::filesystem::path& tmp, const std::filesystem::path& path) {
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

void write_bytes_atomic(const std::filesystem::path& path, const char* data, std::size_t bytes) {
    const auto tmp = tmp_name(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(data, static_cast<std::streamsize>(bytes));
        out.flush();
        if (!out) throw IoError("short write to " + tmp.string());
    }
    rename_over(tmp, path);
}

} // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    write_bytes_atomic(path, text.data(), text.size());
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& value) {
    write_text_atomic(path, value.dump(2) + "\n");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptHeader("cannot open " + path.string());
    nlohmann::json value = nlohmann::json::parse(in, nullptr, false);
    if (value.is_discarded()) throw CorruptHeader("invalid JSON in " + path.string());
    return value;
}

void save_field(const Field& field, const std::filesystem::path& stem, const FieldMeta& meta) {
    field.check_consistent();
    const Grid& g = field.grid;

    auto bin = stem;
    bin += ".bin";
    write_bytes_atomic(bin, reinterpret_cast<const char*>(field.values.data()),
                       field.values.size() * sizeof(double));

    nlohmann::json side;
    side["format-version"] = format_version;
    side["dimension"] = g.dimension;
    side["shape"] = std::vector<int>(g.shape.begin(), g.shape.begin() + g.dimension);
    side["spacing"] = g.spacing;
    side["periodic"] = g.periodic;
    side["units"] = meta.units;
    side["spec"] = meta.spec.is_null() ? nlohmann::json::object() : meta.spec;
    side["seed"] = {{"master", meta.seed.master}, {"realization", meta.seed.realization}};

    auto json_path = stem;
    json_path += ".json";
    write_json_atomic(json_path, side);
}

LoadedField load_field(const std::filesystem::path& stem) {
    auto json_path = stem;
    json_path += ".json";
    const nlohmann::json side = read_json(json_path);

    for (const char* key : {"format-version", "dimension", "shape", "spacing", "periodic",
                            "units", "spec", "seed"}) {
        if (!side.contains(key))
            throw CorruptHeader("sidecar " + json_path.string() + " missing key '" + key + "'");
    }
    const int version = side.at("format-version").get<int>();
    if (version != format_version)
        throw VersionMismatch("sidecar " + json_path.string() + " has format-version " +
                              std::to_string(version) + ", expected " +
                              std::to_string(format_version));

    Grid g;
    g.dimension = side.at("dimension").get<int>();
    const auto shape = side.at("shape").get<std::vector<int>>();
    if (g.dimension < 1 || g.dimension > 3 || shape.size() != static_cast<std::size_t>(g.dimension))
        throw CorruptHeader("sidecar " + json_path.string() + " shape does not match dimension");
    g.shape = {1, 1, 1};
    for (std::size_t a = 0; a < shape.size(); ++a) g.shape[a] = shape[a];
    g.spacing = side.at("spacing").get<double>();
    g.periodic = side.at("periodic").get<bool>();
    g.validate();

    auto bin = stem;
    bin += ".bin";
    std::error_code ec;
    const auto bytes = std::filesystem::file_size(bin, ec);
    if (ec) throw CorruptHeader("cannot stat " + bin.string() + ": " + ec.message());
    const std::size_t expected = g.size() * sizeof(double);
    if (bytes != expected)
        throw CorruptHeader(bin.string() + " holds " + std::to_string(bytes) +
                            " bytes, sidecar shape requires " + std::to_string(expected));

    LoadedField loaded;
    loaded.sidecar = side;
    loaded.meta.units = side.at("units").get<std::string>();
    loaded.meta.spec = side.at("spec");
    loaded.meta.seed.master = side.at("seed").at("master").get<std::uint64_t>();
    loaded.meta.seed.realization = side.at("seed").at("realization").get<std::uint64_t>();

    loaded.field.grid = g;
    loaded.field.values.resize(g.size());
    std::ifstream in(bin, std::ios::binary);
    if (!in) throw CorruptHeader("cannot open " + bin.string());
    in.read(reinterpret_cast<char*>(loaded.field.values.data()),
            static_cast<std::streamsize>(expected));
    if (in.gcount() != static_cast<std::streamsize>(expected))
        throw CorruptHeader("short read from " + bin.string());
    return loaded;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char c : cell) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

} // namespace

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> columns)
    : path_(std::move(path)), tmp_(tmp_name(path_)), columns_(columns.size()) {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + tmp_.string() + " for writing");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(columns[i]);
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() {
    if (!closed_) {
        // Abandoned writer (exception unwinding): leave only the tmp file.
        out_.close();
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw IoError("csv row width mismatch for " + path_.string());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw IoError("csv row width mismatch for " + path_.string());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(cells[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    out_.flush();
    if (!out_) throw IoError("short write to " + tmp_.string());
    out_.close();
    rename_over(tmp_, path_);
    closed_ = true;
}

} // namespace bosegas::io
