#ifndef BOSEGAS_UNITS_HPP
#define BOSEGAS_UNITS_HPP

#include <string>

namespace bosegas::units {

// SI base-dimension exponents. Fractional powers are legal (the white-noise
// strength carries energy * length^{d/2}).
struct Dims {
    double length = 0.0;
    double mass = 0.0;
    double time = 0.0;

    bool close_to(const Dims& o) const;
};

Dims operator+(const Dims& a, const Dims& b);
Dims operator*(const Dims& a, double p);

inline Dims dimensionless() { return {}; }
inline Dims length_dims() { return {1.0, 0.0, 0.0}; }
inline Dims mass_dims() { return {0.0, 1.0, 0.0}; }
inline Dims time_dims() { return {0.0, 0.0, 1.0}; }
inline Dims frequency_dims() { return {0.0, 0.0, -1.0}; }
inline Dims energy_dims() { return {2.0, 1.0, -2.0}; }
inline Dims action_dims() { return {2.0, 1.0, -1.0}; }
inline Dims density_dims(int d) { return {-static_cast<double>(d), 0.0, 0.0}; }
// <U(x)U(x')> = kappa^2 delta(x - x'): energy * length^{d/2}.
inline Dims kappa_dims(int d) { return energy_dims() + length_dims() * (0.5 * d); }
inline Dims coupling_dims(int d) { return energy_dims() + length_dims() * d; }

std::string to_string(const Dims& dims);

// A value reduced to SI base units (m, kg, s).
struct Quantity {
    double value = 0.0;
    Dims dims;
};

// Unit grammar: tokens joined by '*' or '/', each a symbol with an optional
// '^' float exponent; '/' negates the single token that follows it. Symbols:
// m cm mm um nm | kg g amu | s ms us ns | J eV meV ueV neV | K (as k_B T) |
// Hz kHz (angular, 1/s) | 1 (dimensionless). Throws UnknownUnit.
Quantity parse(double value, const std::string& unit);

inline constexpr double hbar_si = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;       // J / K
inline constexpr double electron_volt = 1.602176634e-19;  // J
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg

// Internal computations run with hbar = 1 and a unit reference mass; fixing
// the reference mass (kg) and length (m) pins the time and energy units as
// t0 = m0 l0^2 / hbar, e0 = hbar^2 / (m0 l0^2).
struct UnitSystem {
    double length0 = 1.0; // meters per internal length
    double mass0 = 1.0;   // kg per internal mass
    double time0 = 1.0;   // seconds per internal time

    // Inputs already dimensionless; conversions are the identity.
    static UnitSystem natural();
    static UnitSystem from_mass_length(double mass_kg, double length_m);

    double energy0() const; // joules per internal energy

    double to_internal(const Quantity& q) const;
    double from_internal(double value, const Dims& dims) const;
    bool is_natural() const;
};

} // namespace bosegas::units

#endif
