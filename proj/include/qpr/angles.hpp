#pragma once

#include <cmath>
#include <numbers>

namespace qpr {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Map an angle to [0, 2*pi).
inline double wrap_angle(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod of a tiny negative can land exactly on 2*pi after the correction
    if (w >= kTwoPi) w = 0.0;
    return w;
}

// Smallest absolute difference between two angles on the circle.
inline double angle_distance(double a, double b) {
    double diff = wrap_angle(a - b);
    return std::min(diff, kTwoPi - diff);
}

} // namespace qpr
