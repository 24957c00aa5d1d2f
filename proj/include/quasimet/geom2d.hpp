#pragma once

#include <cmath>

namespace quasimet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend Vec2 operator*(double s, Vec2 v) { return v * s; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

// Symmetric 2x2 bilinear form.
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    static Sym2 identity() { return {1.0, 0.0, 1.0}; }

    double apply(Vec2 v, Vec2 w) const {
        return xx * v.x * w.x + xy * (v.x * w.y + v.y * w.x) + yy * v.y * w.y;
    }
    double quad(Vec2 v) const { return apply(v, v); }

    double det() const { return xx * yy - xy * xy; }
    bool positive_definite() const { return xx > 0.0 && det() > 0.0; }

    Sym2 inverse() const {
        double d = det();
        return {yy / d, -xy / d, xx / d};
    }

    Sym2 operator+(const Sym2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
    Sym2 operator-(const Sym2& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
    Sym2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
};

// Rank-one form v ⊗ v.
inline Sym2 outer(Vec2 v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

// General 2x2 matrix (Jacobians, rotations).
struct Mat2 {
    double a = 1.0, b = 0.0;  // row 1
    double c = 0.0, d = 1.0;  // row 2

    static Mat2 identity() { return {}; }
    static Mat2 rotation(double angle) {
        double co = std::cos(angle), si = std::sin(angle);
        return {co, -si, si, co};
    }

    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    Vec2 corner() const { return {x0, y0}; }
    bool contains(Vec2 p, double slack = 0.0) const {
        return p.x >= x0 - slack && p.x <= x1 + slack && p.y >= y0 - slack && p.y <= y1 + slack;
    }
    Vec2 lerp(double sx, double sy) const {
        return {x0 + sx * width(), y0 + sy * height()};
    }
};

}  // namespace quasimet
