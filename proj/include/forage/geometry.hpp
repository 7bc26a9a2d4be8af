#pragma once

#include <cmath>

namespace forage {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;

    double norm() const { return std::sqrt(x * x + y * y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Axis-aligned rectangle, closed on all sides.
struct Rect {
    Vec2 min{};
    Vec2 max{};

    bool operator==(const Rect&) const = default;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    bool valid() const { return min.x <= max.x && min.y <= max.y; }

    bool contains(Vec2 p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }

    /// Closest point of the rectangle to p.
    Vec2 clamp(Vec2 p) const {
        return {std::fmin(std::fmax(p.x, min.x), max.x),
                std::fmin(std::fmax(p.y, min.y), max.y)};
    }
};

} // namespace forage
