#ifndef BOSEGAS_CONSTANTS_HPP
#define BOSEGAS_CONSTANTS_HPP

#include "bosegas/errors.hpp"

namespace bosegas {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double e_base = 2.71828182845904523536;

// Volume of the unit ball: Omega_1 = 2, Omega_2 = pi, Omega_3 = 4pi/3.
// Omega_0 = 1 keeps d = 3 reduction formulas exact.
inline double unit_ball_volume(int d) {
    switch (d) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return pi;
    case 3: return 4.0 * pi / 3.0;
    default: throw InvalidDimension("unit_ball_volume: d must be 0..3");
    }
}

} // namespace bosegas

#endif
