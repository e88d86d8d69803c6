#pragma once

#include <cmath>
#include <stdexcept>

namespace mwsn {

// 2-D point / displacement in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double distance(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Rectangular sensing field with origin at (0,0).
struct FieldGeometry {
    double width = 1000.0;
    double height = 1000.0;

    bool contains(Vec2 p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }

    bool operator==(const FieldGeometry&) const = default;
};

// Partition of the field into rows x cols rectangular zones.
struct ZoneGrid {
    int rows = 4;
    int cols = 4;

    int zone_count() const { return rows * cols; }

    bool operator==(const ZoneGrid&) const = default;
};

inline double cell_width(const ZoneGrid& g, const FieldGeometry& f) {
    return f.width / static_cast<double>(g.cols);
}

inline double cell_height(const ZoneGrid& g, const FieldGeometry& f) {
    return f.height / static_cast<double>(g.rows);
}

// Row-major zone index of a point. Points exactly on the max boundary clamp
// into the last row/column so the mapping is total on the closed field.
inline int zone_index(Vec2 pos, const ZoneGrid& g, const FieldGeometry& f) {
    if (!f.contains(pos))
        throw std::invalid_argument("zone_index: position outside field");
    int col = static_cast<int>(pos.x / cell_width(g, f));
    int row = static_cast<int>(pos.y / cell_height(g, f));
    if (col >= g.cols) col = g.cols - 1;
    if (row >= g.rows) row = g.rows - 1;
    return row * g.cols + col;
}

// Geometric center of a zone's rectangle.
inline Vec2 zone_center(int zone, const ZoneGrid& g, const FieldGeometry& f) {
    if (zone < 0 || zone >= g.zone_count())
        throw std::invalid_argument("zone_center: invalid zone id");
    const int row = zone / g.cols;
    const int col = zone % g.cols;
    const double cw = cell_width(g, f);
    const double ch = cell_height(g, f);
    return {(col + 0.5) * cw, (row + 0.5) * ch};
}

}  // namespace mwsn
