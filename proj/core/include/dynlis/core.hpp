#pragma once

// Input normalization, static LIS (patience sorting with witness),
// incremental LIS under appends, and the partition of a point set into
// LIS(P) decreasing subsequences.

#include <cstdint>
#include <span>
#include <vector>

#include "dynlis/patience.hpp"
#include "dynlis/types.hpp"

namespace dynlis {

// Replaces values by ranks so that the points form a permutation of [n] on
// both axes. Equal values are ranked so that the earlier element is larger;
// this preserves the strict LIS length.
PointSet normalize(std::span<const int64_t> values);

struct LisResult {
    int64_t length = 0;
    Chain chain;
};

// Exact LIS with one witness chain. Points must be sorted by x.
LisResult lis_static(const PointSet& points);

// LIS of a growing sequence of points; appends must have strictly
// increasing x and cost O(log n) each.
class IncrementalLis {
  public:
    int64_t append(Point p);
    int64_t length() const;
    Chain witness() const;

  private:
    struct YLess {
        bool operator()(const Point& a, const Point& b) const { return a.y < b.y; }
    };
    PatienceLis<Point, YLess> acc_;
    bool has_last_ = false;
    Coord last_x_ = 0;
};

// Splits P into exactly LIS(P) parts; part l holds the points whose longest
// increasing subsequence ending there has length l. Each part is strictly
// decreasing in y while increasing in x.
std::vector<Chain> decreasing_partition(const PointSet& points);

}  // namespace dynlis
