#pragma once

#include <cmath>

namespace shockrefl {

/// Plain 2-vector used for velocities, positions in the similarity plane and unit directions.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3-D cross product.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
/// Rotation by 90 degrees counterclockwise.
constexpr Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 rotate(Vec2 a, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }
/// Direction angle in (-pi, pi].
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }
/// Signed counterclockwise angle from a to b in (-pi, pi].
inline double signed_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }
/// Mirror image of v across the line through the origin with unit normal n.
constexpr Vec2 reflect(Vec2 v, Vec2 n) { return v - 2.0 * dot(v, n) * n; }

constexpr double pi = 3.14159265358979323846;
constexpr double deg(double rad) { return rad * 180.0 / pi; }
constexpr double rad(double deg) { return deg * pi / 180.0; }

}  // namespace shockrefl
