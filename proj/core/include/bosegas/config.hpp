#ifndef BOSEGAS_CONFIG_HPP
#define BOSEGAS_CONFIG_HPP

#include "bosegas/grid.hpp"
#include "bosegas/scales.hpp"
#include "bosegas/units.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bosegas {

// Typed view over a JSON run configuration. Numeric leaves are either plain
// numbers, taken as internal hbar = 1 units, or {"value": v, "unit": "..."}
// objects converted through the top-level "units" block ({"mass": q,
// "length": q}, SI). Getter failures throw ConfigError carrying the dotted
// path of the offending entry.
class Config {
public:
    Config();
    explicit Config(nlohmann::json root);
    static Config from_file(const std::filesystem::path& path);

    const nlohmann::json& root() const { return root_; }
    const units::UnitSystem& unit_system() const { return system_; }

    bool has(const std::string& path) const;
    const nlohmann::json& at(const std::string& path) const;

    double number(const std::string& path) const;
    double number_or(const std::string& path, double fallback) const;
    int integer(const std::string& path) const;
    int integer_or(const std::string& path, int fallback) const;
    bool flag_or(const std::string& path, bool fallback) const;
    std::string text(const std::string& path) const;
    std::string text_or(const std::string& path, const std::string& fallback) const;
    std::vector<double> number_list(const std::string& path) const;

    double quantity(const std::string& path, const units::Dims& dims) const;
    double quantity_or(const std::string& path, const units::Dims& dims, double fallback) const;
    std::optional<double> quantity_opt(const std::string& path, const units::Dims& dims) const;

private:
    double convert(const nlohmann::json& node, const units::Dims& dims,
                   const std::string& path) const;

    nlohmann::json root_;
    units::UnitSystem system_;
};

// Builders for the common config subtrees. Paths are rooted at "params" and
// "grid"; all throw ConfigError / ValidationError with the offending path.
PhysicalParams params_from_config(const Config& cfg);
DisorderSpec disorder_from_config(const Config& cfg, int dimension);
Grid grid_from_config(const Config& cfg, int dimension);

} // namespace bosegas

#endif
