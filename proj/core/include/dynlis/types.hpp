#pragma once

#include <cstdint>
#include <vector>

namespace dynlis {

using Coord = int32_t;

// A 2D point with distinct coordinates. Arrays are viewed as point sets
// {(i, a_i)}; an increasing subsequence is a chain of points each strictly
// dominating its predecessor.
struct Point {
    Coord x = 0;
    Coord y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline bool dominates(Point a, Point b) { return a.x > b.x && a.y > b.y; }

// Chain: strictly increasing in both coordinates.
using Chain = std::vector<Point>;

// The current array as points; kept sorted by x, all coordinates distinct.
struct PointSet {
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

inline bool is_chain(const Chain& c) {
    for (std::size_t i = 1; i < c.size(); ++i)
        if (!dominates(c[i], c[i - 1])) return false;
    return true;
}

}  // namespace dynlis
