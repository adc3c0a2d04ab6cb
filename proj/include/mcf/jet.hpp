#pragma once

// Second-order forward-mode jet in two variables: value, gradient, Hessian.
// Lets the potential and indicator formulas be written once and differentiated exactly.

#include <cmath>

namespace mcf {

struct Jet {
    double v = 0.0;
    double gx = 0.0, gy = 0.0;
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;

    Jet() = default;
    Jet(double c) : v(c) {} // NOLINT: constants promote implicitly

    static Jet var_x(double x) { Jet j(x); j.gx = 1.0; return j; }
    static Jet var_y(double y) { Jet j(y); j.gy = 1.0; return j; }
};

using std::atan2;
using std::cos;
using std::sin;
using std::sqrt;

inline double val(double x) { return x; }
inline double val(const Jet& x) { return x.v; }

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v + b.v; r.gx = a.gx + b.gx; r.gy = a.gy + b.gy;
    r.hxx = a.hxx + b.hxx; r.hxy = a.hxy + b.hxy; r.hyy = a.hyy + b.hyy;
    return r;
}
inline Jet operator-(const Jet& a) {
    Jet r;
    r.v = -a.v; r.gx = -a.gx; r.gy = -a.gy; r.hxx = -a.hxx; r.hxy = -a.hxy; r.hyy = -a.hyy;
    return r;
}
inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
inline Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v * b.v;
    r.gx = a.gx * b.v + a.v * b.gx;
    r.gy = a.gy * b.v + a.v * b.gy;
    r.hxx = a.hxx * b.v + 2.0 * a.gx * b.gx + a.v * b.hxx;
    r.hxy = a.hxy * b.v + a.gx * b.gy + a.gy * b.gx + a.v * b.hxy;
    r.hyy = a.hyy * b.v + 2.0 * a.gy * b.gy + a.v * b.hyy;
    return r;
}
inline Jet operator*(double s, const Jet& a) {
    Jet r;
    r.v = s * a.v; r.gx = s * a.gx; r.gy = s * a.gy; r.hxx = s * a.hxx; r.hxy = s * a.hxy; r.hyy = s * a.hyy;
    return r;
}
inline Jet operator*(const Jet& a, double s) { return s * a; }
inline Jet operator+(const Jet& a, double s) { Jet r = a; r.v += s; return r; }
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { Jet r = a; r.v -= s; return r; }
inline Jet operator-(double s, const Jet& a) { return (-a) + s; }

// Chain rule for a scalar function with value f, first derivative d1, second derivative d2.
inline Jet chain(const Jet& a, double f, double d1, double d2) {
    Jet r;
    r.v = f;
    r.gx = d1 * a.gx; r.gy = d1 * a.gy;
    r.hxx = d1 * a.hxx + d2 * a.gx * a.gx;
    r.hxy = d1 * a.hxy + d2 * a.gx * a.gy;
    r.hyy = d1 * a.hyy + d2 * a.gy * a.gy;
    return r;
}

inline Jet recip(const Jet& a) {
    double i = 1.0 / a.v;
    return chain(a, i, -i * i, 2.0 * i * i * i);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }
inline Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
inline Jet operator/(double s, const Jet& a) { return s * recip(a); }

inline Jet sqrt(const Jet& a) {
    double s = std::sqrt(a.v);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }

inline Jet atan2(const Jet& y, const Jet& x) {
    Jet out;
    out.v = std::atan2(y.v, x.v);
    double q = x.v * x.v + y.v * y.v;
    double ax = -y.v / q, ay = x.v / q; // partials w.r.t. (x, y)
    out.gx = ax * x.gx + ay * y.gx;
    out.gy = ax * x.gy + ay * y.gy;
    // Hessian of atan2 in (x, y)
    double q2 = q * q;
    double fxx = 2.0 * x.v * y.v / q2;
    double fyy = -2.0 * x.v * y.v / q2;
    double fxy = (y.v * y.v - x.v * x.v) / q2;
    auto second = [&](double xa, double xb, double ya, double yb, double xab, double yab) {
        return fxx * xa * xb + fxy * (xa * yb + ya * xb) + fyy * ya * yb + ax * xab + ay * yab;
    };
    out.hxx = second(x.gx, x.gx, y.gx, y.gx, x.hxx, y.hxx);
    out.hxy = second(x.gx, x.gy, y.gx, y.gy, x.hxy, y.hxy);
    out.hyy = second(x.gy, x.gy, y.gy, y.gy, x.hyy, y.hyy);
    return out;
}

} // namespace mcf
