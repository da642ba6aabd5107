#pragma once

#include <cmath>

namespace shlab {

// Second-order forward-mode number: value with first and second derivative
// along one variable.
struct Dual2 {
    double v = 0, d = 0, dd = 0;

    Dual2() = default;
    Dual2(double x) : v(x) {}  // NOLINT: implicit constants are convenient
    Dual2(double x, double dx, double ddx) : v(x), d(dx), dd(ddx) {}
    static Dual2 variable(double x) { return {x, 1.0, 0.0}; }
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline Dual2 operator-(const Dual2& a, const Dual2& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline Dual2 operator-(const Dual2& a) { return {-a.v, -a.d, -a.dd}; }
inline Dual2 operator*(const Dual2& a, const Dual2& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2 * a.d * b.d + a.v * b.dd};
}

// f(a) given f, f', f'' at a.v
inline Dual2 chain(const Dual2& a, double f, double f1, double f2) {
    return {f, f1 * a.d, f2 * a.d * a.d + f1 * a.dd};
}

inline Dual2 pow(const Dual2& a, double p) {
    const double f = std::pow(a.v, p);
    const double f1 = p * std::pow(a.v, p - 1);
    const double f2 = p * (p - 1) * std::pow(a.v, p - 2);
    return chain(a, f, f1, f2);
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) { return a * pow(b, -1.0); }
inline Dual2 sqrt(const Dual2& a) { return pow(a, 0.5); }
inline Dual2 log(const Dual2& a) { return chain(a, std::log(a.v), 1 / a.v, -1 / (a.v * a.v)); }

inline double value(double x) { return x; }
inline double value(const Dual2& x) { return x.v; }

}  // namespace shlab
