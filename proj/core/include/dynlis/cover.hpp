#pragma once

// Covers and covering families over integer point sets: the static
// "LIS sparsification" primitive. A covering family keeps one cover per
// level with geometrically growing scores; querying binary-searches the
// levels for the largest one holding a segment inside the interval.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dynlis/pbst.hpp"
#include "dynlis/types.hpp"

namespace dynlis {

struct Segment {
    Coord begin = 0;  // x of the first chain element
    Coord end = 0;    // x of the last chain element
    Chain chain;

    int64_t score() const { return int64_t(chain.size()); }
};

// Greedy k-cover; depth at most k. LIS(points) < k yields an empty cover.
std::vector<Segment> cover_exact(const PointSet& points, int64_t k);

// Greedy (k1,k2)-cover, k2 > k1 >= 1; depth at most k1/(k2-k1).
std::vector<Segment> cover_approx(const PointSet& points, int64_t k1, int64_t k2);

// Largest number of segment intervals containing a common x.
int64_t depth(std::span<const Segment> segments);

class CoveringFamily {
  public:
    // r == 0 builds the exact family (a k-cover for every k up to n);
    // otherwise 1 < gamma < 2 and r >= 2 are required.
    CoveringFamily(const PointSet& points, double gamma, int r);

    struct QueryResult {
        int64_t score = 0;
        const Segment* segment = nullptr;  // null iff score == 0
    };

    // Reported score s satisfies OPT(i,j)/gamma^r <= s <= OPT(i,j).
    QueryResult query(Coord i, Coord j) const;

    size_t level_count() const { return levels_.size(); }
    int64_t level_score(size_t idx) const { return levels_[idx].score; }
    // Segments of one level in cover order, for inspection and tests.
    std::vector<Segment> level_segments(size_t idx) const;

  private:
    struct Level {
        int64_t score;
        double cap;
        pbst::Ref<Segment> tree;
    };
    std::shared_ptr<pbst::Pool<Segment>> pool_;
    std::vector<Level> levels_;
};

}  // namespace dynlis
