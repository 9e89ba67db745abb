#include "bosegas/units.hpp"

#include "bosegas/errors.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string_view>

namespace bosegas::units {

namespace {

constexpr double kDimTol = 1e-9;

struct SymbolEntry {
    std::string_view symbol;
    double scale;
    Dims dims;
};

constexpr Dims kLength{1.0, 0.0, 0.0};
constexpr Dims kMass{0.0, 1.0, 0.0};
constexpr Dims kTime{0.0, 0.0, 1.0};
constexpr Dims kEnergy{2.0, 1.0, -2.0};
constexpr Dims kInvTime{0.0, 0.0, -1.0};

// "Hz" converts as an angular rate (1/s) with no 2 pi factor: a trap quoted
// at omega / 2 pi must be entered with the 2 pi applied by the caller.
constexpr std::array<SymbolEntry, 21> kSymbols{{
    {"m", 1.0, kLength},
    {"cm", 1e-2, kLength},
    {"mm", 1e-3, kLength},
    {"um", 1e-6, kLength},
    {"nm", 1e-9, kLength},
    {"kg", 1.0, kMass},
    {"g", 1e-3, kMass},
    {"amu", atomic_mass_unit, kMass},
    {"s", 1.0, kTime},
    {"ms", 1e-3, kTime},
    {"us", 1e-6, kTime},
    {"ns", 1e-9, kTime},
    {"J", 1.0, kEnergy},
    {"eV", electron_volt, kEnergy},
    {"meV", 1e-3 * electron_volt, kEnergy},
    {"ueV", 1e-6 * electron_volt, kEnergy},
    {"neV", 1e-9 * electron_volt, kEnergy},
    {"K", k_boltzmann, kEnergy},
    {"Hz", 1.0, kInvTime},
    {"kHz", 1e3, kInvTime},
    {"1", 1.0, Dims{}},
}};

const SymbolEntry& lookup(std::string_view symbol, const std::string& unit) {
    for (const auto& entry : kSymbols) {
        if (entry.symbol == symbol) return entry;
    }
    throw UnknownUnit("unknown unit symbol '" + std::string(symbol) + "' in '" + unit + "'");
}

} // namespace

bool Dims::close_to(const Dims& o) const {
    return std::abs(length - o.length) < kDimTol && std::abs(mass - o.mass) < kDimTol &&
           std::abs(time - o.time) < kDimTol;
}

Dims operator+(const Dims& a, const Dims& b) {
    return {a.length + b.length, a.mass + b.mass, a.time + b.time};
}

Dims operator*(const Dims& a, double p) { return {a.length * p, a.mass * p, a.time * p}; }

std::string to_string(const Dims& dims) {
    std::ostringstream out;
    out << "m^" << dims.length << " kg^" << dims.mass << " s^" << dims.time;
    return out.str();
}

Quantity parse(double value, const std::string& unit) {
    Quantity q{value, Dims{}};
    if (unit.empty()) return q;

    std::string_view rest(unit);
    double sign = 1.0;
    while (!rest.empty()) {
        const std::size_t cut = rest.find_first_of("*/");
        std::string_view token = rest.substr(0, cut);
        if (token.empty()) throw UnknownUnit("empty unit token in '" + unit + "'");

        double exponent = 1.0;
        if (const std::size_t caret = token.find('^'); caret != std::string_view::npos) {
            const std::string digits(token.substr(caret + 1));
            char* end = nullptr;
            exponent = std::strtod(digits.c_str(), &end);
            if (end == digits.c_str() || *end != '\0')
                throw UnknownUnit("bad exponent '" + digits + "' in '" + unit + "'");
            token = token.substr(0, caret);
        }

        const SymbolEntry& entry = lookup(token, unit);
        const double p = sign * exponent;
        q.value *= std::pow(entry.scale, p);
        q.dims = q.dims + entry.dims * p;

        if (cut == std::string_view::npos) break;
        sign = rest[cut] == '/' ? -1.0 : 1.0;
        rest = rest.substr(cut + 1);
    }
    return q;
}

UnitSystem UnitSystem::natural() { return {}; }

UnitSystem UnitSystem::from_mass_length(double mass_kg, double length_m) {
    if (!(mass_kg > 0.0)) throw NonPositiveInput("reference mass must be positive");
    if (!(length_m > 0.0)) throw NonPositiveInput("reference length must be positive");
    UnitSystem sys;
    sys.length0 = length_m;
    sys.mass0 = mass_kg;
    sys.time0 = mass_kg * length_m * length_m / hbar_si;
    return sys;
}

double UnitSystem::energy0() const { return mass0 * length0 * length0 / (time0 * time0); }

double UnitSystem::to_internal(const Quantity& q) const {
    return q.value / (std::pow(length0, q.dims.length) * std::pow(mass0, q.dims.mass) *
                      std::pow(time0, q.dims.time));
}

double UnitSystem::from_internal(double value, const Dims& dims) const {
    return value * std::pow(length0, dims.length) * std::pow(mass0, dims.mass) *
           std::pow(time0, dims.time);
}

bool UnitSystem::is_natural() const {
    return length0 == 1.0 && mass0 == 1.0 && time0 == 1.0;
}

} // namespace bosegas::units
