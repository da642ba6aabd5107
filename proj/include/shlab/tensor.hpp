#pragma once

#include <array>
#include <cmath>

namespace shlab {

using Vec3 = std::array<double, 3>;

// Symmetric 3x3 tensor stored as (00, 01, 02, 11, 12, 22).
struct Sym3 {
    std::array<double, 6> c{};

    static constexpr int slot(int a, int b) {
        if (a > b) { int t = a; a = b; b = t; }
        return a == 0 ? b : (a == 1 ? 2 + b : 5);
    }
    double& operator()(int a, int b) { return c[slot(a, b)]; }
    double operator()(int a, int b) const { return c[slot(a, b)]; }

    static Sym3 diag(double a, double b, double d) {
        Sym3 s;
        s.c = {a, 0, 0, b, 0, d};
        return s;
    }
    static Sym3 identity() { return diag(1, 1, 1); }

    Sym3& operator+=(const Sym3& o) { for (int i = 0; i < 6; ++i) c[i] += o.c[i]; return *this; }
    Sym3& operator-=(const Sym3& o) { for (int i = 0; i < 6; ++i) c[i] -= o.c[i]; return *this; }
    Sym3& operator*=(double s) { for (auto& x : c) x *= s; return *this; }
};

inline Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
inline Sym3 operator-(Sym3 a, const Sym3& b) { return a -= b; }
inline Sym3 operator*(Sym3 a, double s) { return a *= s; }
inline Sym3 operator*(double s, Sym3 a) { return a *= s; }

inline double det(const Sym3& g) {
    return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2))
         - g(0, 1) * (g(0, 1) * g(2, 2) - g(1, 2) * g(0, 2))
         + g(0, 2) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2));
}

// Returns false when the determinant is not strictly positive.
inline bool try_inverse(const Sym3& g, Sym3& inv, double& d) {
    d = det(g);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double s = 1.0 / d;
    inv(0, 0) = (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2)) * s;
    inv(0, 1) = (g(0, 2) * g(1, 2) - g(0, 1) * g(2, 2)) * s;
    inv(0, 2) = (g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1)) * s;
    inv(1, 1) = (g(0, 0) * g(2, 2) - g(0, 2) * g(0, 2)) * s;
    inv(1, 2) = (g(0, 2) * g(0, 1) - g(0, 0) * g(1, 2)) * s;
    inv(2, 2) = (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1)) * s;
    return true;
}

// Sylvester's criterion on the leading minors.
inline bool positive_definite(const Sym3& g) {
    const double m1 = g(0, 0);
    const double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    return m1 > 0 && m2 > 0 && det(g) > 0;
}

// g^{ij} T_ij
inline double trace(const Sym3& ginv, const Sym3& t) {
    return ginv.c[0] * t.c[0] + ginv.c[3] * t.c[3] + ginv.c[5] * t.c[5]
         + 2.0 * (ginv.c[1] * t.c[1] + ginv.c[2] * t.c[2] + ginv.c[4] * t.c[4]);
}

// g^{ia} g^{jb} T_ij S_ab
inline double inner(const Sym3& ginv, const Sym3& t, const Sym3& s) {
    double acc = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double ts = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) ts += ginv(i, a) * ginv(j, b) * s(a, b);
            acc += t(i, j) * ts;
        }
    return acc;
}

inline double norm2(const Sym3& ginv, const Sym3& t) { return inner(ginv, t, t); }

// T_ij x^j
inline Vec3 contract(const Sym3& t, const Vec3& x) {
    Vec3 y{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y[i] += t(i, j) * x[j];
    return y;
}

// T_ij x^i y^j
inline double apply(const Sym3& t, const Vec3& x, const Vec3& y) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += t(i, j) * x[i] * y[j];
    return s;
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace shlab
