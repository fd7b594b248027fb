#include "dynlis/core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dynlis {

PointSet normalize(std::span<const int64_t> values) {
    const size_t n = values.size();
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Among equal values the earlier element receives the larger rank, so a
    // strict chain can never use two copies of the same value.
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a > b;
    });
    PointSet ps;
    ps.points.resize(n);
    for (size_t r = 0; r < n; ++r) ps.points[order[r]] = Point{Coord(order[r]), Coord(r)};
    return ps;
}

namespace {
struct PointYLess {
    bool operator()(const Point& a, const Point& b) const { return a.y < b.y; }
};
}  // namespace

LisResult lis_static(const PointSet& points) {
    PatienceLis<Point, PointYLess> acc;
    for (size_t i = 0; i < points.points.size(); ++i) {
        if (i > 0 && points.points[i].x <= points.points[i - 1].x)
            throw std::invalid_argument("lis_static: points must be sorted by x");
        acc.append(points.points[i]);
    }
    LisResult res;
    res.length = acc.length();
    res.chain = acc.witness();
    return res;
}

int64_t IncrementalLis::append(Point p) {
    if (has_last_ && p.x <= last_x_)
        throw std::invalid_argument("IncrementalLis: x coordinates must strictly increase");
    has_last_ = true;
    last_x_ = p.x;
    return acc_.append(p);
}

int64_t IncrementalLis::length() const { return acc_.length(); }

Chain IncrementalLis::witness() const { return acc_.witness(); }

std::vector<Chain> decreasing_partition(const PointSet& points) {
    // The pile index an element lands on equals the length of the longest
    // increasing subsequence ending at it.
    std::vector<Chain> parts;
    std::vector<Coord> tops;
    for (size_t i = 0; i < points.points.size(); ++i) {
        const Point p = points.points[i];
        if (i > 0 && p.x <= points.points[i - 1].x)
            throw std::invalid_argument("decreasing_partition: points must be sorted by x");
        size_t lo = 0, hi = tops.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (tops[mid] < p.y)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo == tops.size()) {
            tops.push_back(p.y);
            parts.emplace_back();
        } else {
            tops[lo] = p.y;
        }
        parts[lo].push_back(p);
    }
    return parts;
}

}  // namespace dynlis
