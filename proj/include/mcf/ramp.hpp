#pragma once

#include "mcf/jet.hpp"

#include <cmath>
#include <type_traits>

namespace mcf {

// Quintic smoothstep on [0,1], constant outside.
template <class T>
T smoothstep5(const T& x) {
    double v = val(x);
    if (v <= 0.0) return T(0.0);
    if (v >= 1.0) return T(1.0);
    if constexpr (std::is_same_v<T, double>) {
        return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    } else {
        double f = v * v * v * (10.0 - 15.0 * v + 6.0 * v * v);
        double d1 = 30.0 * v * v * (1.0 - v) * (1.0 - v);
        double d2 = 60.0 * v * (1.0 - v) * (1.0 - 2.0 * v);
        return chain(x, f, d1, d2);
    }
}

// Linear ramp 0 -> 1 on [0,1] with quadratic end blends of width a (C^{1,1}).
// Maximum slope is 1/(1-a).
inline void blend_ramp(double x, double a, double& f, double& d1, double& d2) {
    double m = 1.0 / (1.0 - a);
    if (x <= 0.0) { f = 0.0; d1 = 0.0; d2 = 0.0; }
    else if (x >= 1.0) { f = 1.0; d1 = 0.0; d2 = 0.0; }
    else if (x < a) { f = m * x * x / (2.0 * a); d1 = m * x / a; d2 = m / a; }
    else if (x > 1.0 - a) { double y = 1.0 - x; f = 1.0 - m * y * y / (2.0 * a); d1 = m * y / a; d2 = -m / a; }
    else { f = m * (x - 0.5 * a); d1 = m; d2 = 0.0; }
}

template <class T>
T blend_ramp(const T& x, double a) {
    double f, d1, d2;
    blend_ramp(val(x), a, f, d1, d2);
    if constexpr (std::is_same_v<T, double>) return f;
    else return chain(x, f, d1, d2);
}

template <class T>
T powd(const T& x, double p) {
    double v = val(x);
    if constexpr (std::is_same_v<T, double>) return std::pow(v, p);
    else return chain(x, std::pow(v, p), p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0));
}

} // namespace mcf
