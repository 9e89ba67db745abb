#include "bosegas/config.hpp"

#include "bosegas/io.hpp"

#include <sstream>

namespace bosegas {

namespace {

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::istringstream in(path);
    std::string part;
    while (std::getline(in, part, '.')) parts.push_back(part);
    return parts;
}

const nlohmann::json* walk(const nlohmann::json& root, const std::string& path) {
    const nlohmann::json* node = &root;
    for (const auto& part : split_path(path)) {
        if (!node->is_object() || !node->contains(part)) return nullptr;
        node = &node->at(part);
    }
    return node;
}

units::Quantity si_quantity(const nlohmann::json& node, const std::string& path) {
    if (node.is_number()) return {node.get<double>(), units::dimensionless()};
    if (node.is_object() && node.contains("value") && node.contains("unit"))
        return units::parse(node.at("value").get<double>(), node.at("unit").get<std::string>());
    throw ConfigError(path + ": expected a number or {\"value\", \"unit\"}");
}

} // namespace

Config::Config() : root_(nlohmann::json::object()), system_(units::UnitSystem::natural()) {}

Config::Config(nlohmann::json root) : root_(std::move(root)), system_(units::UnitSystem::natural()) {
    if (!root_.is_object()) throw ConfigError("config root must be a JSON object");
    if (!root_.contains("units")) return;

    const auto mass = si_quantity(root_.at("units").at("mass"), "units.mass");
    const auto length = si_quantity(root_.at("units").at("length"), "units.length");
    if (!mass.dims.close_to(units::mass_dims()))
        throw ConfigError("units.mass: not a mass (" + units::to_string(mass.dims) + ")");
    if (!length.dims.close_to(units::length_dims()))
        throw ConfigError("units.length: not a length (" + units::to_string(length.dims) + ")");
    system_ = units::UnitSystem::from_mass_length(mass.value, length.value);
}

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json root = nlohmann::json::parse(in, nullptr, false);
    if (root.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
    return Config(std::move(root));
}

bool Config::has(const std::string& path) const { return walk(root_, path) != nullptr; }

const nlohmann::json& Config::at(const std::string& path) const {
    const nlohmann::json* node = walk(root_, path);
    if (!node) throw ConfigError("missing config entry '" + path + "'");
    return *node;
}

double Config::number(const std::string& path) const {
    const auto& node = at(path);
    if (!node.is_number()) throw ConfigError("'" + path + "' must be a number");
    return node.get<double>();
}

double Config::number_or(const std::string& path, double fallback) const {
    return has(path) ? number(path) : fallback;
}

int Config::integer(const std::string& path) const {
    const auto& node = at(path);
    if (!node.is_number_integer()) throw ConfigError("'" + path + "' must be an integer");
    return node.get<int>();
}

int Config::integer_or(const std::string& path, int fallback) const {
    return has(path) ? integer(path) : fallback;
}

bool Config::flag_or(const std::string& path, bool fallback) const {
    if (!has(path)) return fallback;
    const auto& node = at(path);
    if (!node.is_boolean()) throw ConfigError("'" + path + "' must be a boolean");
    return node.get<bool>();
}

std::string Config::text(const std::string& path) const {
    const auto& node = at(path);
    if (!node.is_string()) throw ConfigError("'" + path + "' must be a string");
    return node.get<std::string>();
}

std::string Config::text_or(const std::string& path, const std::string& fallback) const {
    return has(path) ? text(path) : fallback;
}

std::vector<double> Config::number_list(const std::string& path) const {
    const auto& node = at(path);
    if (!node.is_array()) throw ConfigError("'" + path + "' must be an array of numbers");
    std::vector<double> values;
    values.reserve(node.size());
    for (const auto& item : node) {
        if (!item.is_number()) throw ConfigError("'" + path + "' must contain only numbers");
        values.push_back(item.get<double>());
    }
    return values;
}

double Config::convert(const nlohmann::json& node, const units::Dims& dims,
                       const std::string& path) const {
    if (node.is_number()) return node.get<double>();
    const units::Quantity q = si_quantity(node, path);
    if (!q.dims.close_to(dims))
        throw ConfigError(path + ": unit has dimensions " + units::to_string(q.dims) +
                          ", expected " + units::to_string(dims));
    if (system_.is_natural() && !q.dims.close_to(units::dimensionless()))
        throw ConfigError(path + ": dimensional input needs a top-level units block "
                                 "fixing reference mass and length");
    return system_.to_internal(q);
}

double Config::quantity(const std::string& path, const units::Dims& dims) const {
    return convert(at(path), dims, path);
}

double Config::quantity_or(const std::string& path, const units::Dims& dims,
                           double fallback) const {
    return has(path) ? quantity(path, dims) : fallback;
}

std::optional<double> Config::quantity_opt(const std::string& path,
                                           const units::Dims& dims) const {
    if (!has(path)) return std::nullopt;
    return quantity(path, dims);
}

DisorderSpec disorder_from_config(const Config& cfg, int dimension) {
    const std::string variant = cfg.text("params.disorder.variant");
    DisorderSpec spec;
    if (variant == "uncorrelated") {
        spec = DisorderSpec::uncorrelated(
            cfg.quantity("params.disorder.kappa", units::kappa_dims(dimension)));
    } else if (variant == "ornstein_zernike") {
        spec = DisorderSpec::ornstein_zernike(
            cfg.quantity("params.disorder.kappa", units::kappa_dims(dimension)),
            cfg.quantity("params.disorder.b", units::length_dims()));
    } else if (variant == "gaussian") {
        spec = DisorderSpec::gaussian(cfg.quantity("params.disorder.u0", units::energy_dims()),
                                      cfg.quantity("params.disorder.b", units::length_dims()));
    } else if (variant == "lorentz") {
        spec = DisorderSpec::lorentz(cfg.quantity("params.disorder.u0", units::energy_dims()),
                                     cfg.quantity("params.disorder.b", units::length_dims()));
    } else {
        throw ConfigError("params.disorder.variant '" + variant +
                          "' is not one of: uncorrelated, ornstein_zernike, gaussian, lorentz");
    }
    spec.validate(dimension);
    return spec;
}

PhysicalParams params_from_config(const Config& cfg) {
    PhysicalParams p;
    p.dimension = cfg.integer_or("params.dimension", 3);
    if (p.dimension < 1 || p.dimension > 3)
        throw ConfigError("params.dimension must be 1, 2, or 3");
    p.hbar = cfg.quantity_or("params.hbar", units::action_dims(), 1.0);
    p.mass = cfg.quantity_or("params.mass", units::mass_dims(), 1.0);
    p.disorder = disorder_from_config(cfg, p.dimension);

    p.scattering_length = cfg.quantity_opt("params.scattering_length", units::length_dims());
    p.coupling_g = cfg.quantity_opt("params.coupling_g", units::coupling_dims(p.dimension));
    p.mean_density = cfg.quantity_opt("params.mean_density", units::density_dims(p.dimension));
    p.particle_count = cfg.quantity_opt("params.particle_count", units::dimensionless());
    p.trap_frequency = cfg.quantity_opt("params.trap_frequency", units::frequency_dims());
    p.transverse_frequency =
        cfg.quantity_opt("params.transverse_frequency", units::frequency_dims());

    p.validate();
    return p;
}

Grid grid_from_config(const Config& cfg, int dimension) {
    Grid g;
    g.dimension = dimension;
    g.shape = {1, 1, 1};

    const nlohmann::json& pts = cfg.at("grid.points");
    if (pts.is_number_integer()) {
        for (int a = 0; a < dimension; ++a) g.shape[a] = pts.get<int>();
    } else if (pts.is_array() && pts.size() == static_cast<std::size_t>(dimension)) {
        for (int a = 0; a < dimension; ++a) {
            if (!pts[a].is_number_integer())
                throw ConfigError("grid.points must contain integers");
            g.shape[a] = pts[a].get<int>();
        }
    } else {
        throw ConfigError("grid.points must be an integer or an array of length " +
                          std::to_string(dimension));
    }

    g.spacing = cfg.quantity("grid.spacing", units::length_dims());
    g.periodic = cfg.flag_or("grid.periodic", true);
    g.validate();
    return g;
}

} // namespace bosegas
