#include "dynlis/cover.hpp"

#include <cmath>
#include <stdexcept>

#include "dynlis/cover_algo.hpp"

namespace dynlis {

namespace {

struct PointGeom {
    using P = Point;
    bool x_less(Point a, Point b) const { return a.x < b.x; }
    bool y_less(Point a, Point b) const { return a.y < b.y; }
};

std::vector<Segment> to_segments(std::vector<SegmentT<Point>>&& raw) {
    std::vector<Segment> out;
    out.reserve(raw.size());
    for (auto& s : raw) out.push_back(Segment{s.begin.x, s.end.x, Chain(*s.chain)});
    return out;
}

void check_sorted(const PointSet& points) {
    for (size_t i = 1; i < points.points.size(); ++i)
        if (points.points[i].x <= points.points[i - 1].x)
            throw std::invalid_argument("cover: points must be sorted by x");
}

}  // namespace

std::vector<Segment> cover_exact(const PointSet& points, int64_t k) {
    if (k < 1) throw std::invalid_argument("cover_exact: k must be >= 1");
    check_sorted(points);
    return to_segments(greedy_cover(std::span<const Point>(points.points), k, k, PointGeom{}));
}

std::vector<Segment> cover_approx(const PointSet& points, int64_t k1, int64_t k2) {
    if (k1 < 1 || k2 <= k1) throw std::invalid_argument("cover_approx: need k2 > k1 >= 1");
    check_sorted(points);
    return to_segments(greedy_cover(std::span<const Point>(points.points), k1, k2, PointGeom{}));
}

int64_t depth(std::span<const Segment> segments) {
    if (segments.empty()) return 0;
    std::vector<SegmentT<Point>> tmp(segments.size());
    for (size_t i = 0; i < segments.size(); ++i) {
        tmp[i].begin = Point{segments[i].begin, 0};
        tmp[i].end = Point{segments[i].end, 0};
    }
    return interval_depth(std::span<const SegmentT<Point>>(tmp),
                          [](Point a, Point b) { return a.x < b.x; });
}

CoveringFamily::CoveringFamily(const PointSet& points, double gamma, int r)
    : pool_(std::make_shared<pbst::Pool<Segment>>()) {
    if (r != 0 && (gamma <= 1.0 || gamma >= 2.0))
        throw std::invalid_argument("CoveringFamily: gamma must be in (1,2)");
    if (r < 0 || r == 1)
        throw std::invalid_argument("CoveringFamily: r must be 0 or at least 2");
    check_sorted(points);
    const int64_t n = int64_t(points.size());
    int64_t lis = 0;
    {
        std::vector<Coord> tops;
        for (const Point& p : points.points) {
            auto it = std::lower_bound(tops.begin(), tops.end(), p.y);
            if (it == tops.end())
                tops.push_back(p.y);
            else
                *it = p.y;
        }
        lis = int64_t(tops.size());
    }

    auto add_level = [&](int64_t score, double cap, std::vector<Segment>&& segs) {
        Level lvl;
        lvl.score = score;
        lvl.cap = cap;
        lvl.tree = pbst::Ref<Segment>(pool_.get(),
                                      pbst::build_sorted(*pool_, segs.data(), segs.size()));
        levels_.push_back(std::move(lvl));
    };

    // Exact prefix: every i-cover up to min(n, ceil(3/(gamma-1))); the whole
    // range when r == 0. Levels above the LIS are empty and skipped.
    int64_t kexact = (r == 0) ? n : std::min<int64_t>(n, int64_t(std::ceil(3.0 / (gamma - 1.0))));
    for (int64_t k = 1; k <= kexact; ++k) {
        if (k > lis) break;
        add_level(k, double(k), cover_exact(points, k));
    }
    if (r == 0) return;
    for (int64_t j = 1;; ++j) {
        double k1r = double(kexact) * std::pow(gamma, double(j));
        double capr = double(kexact) * std::pow(gamma, double(j + r - 1));
        if (capr > double(n)) break;
        int64_t k1 = int64_t(std::ceil(k1r));
        int64_t k2 = int64_t(std::ceil(capr));
        if (k2 > lis) continue;  // empty level, no interval reaches the cap
        add_level(k1, capr, cover_approx(points, k1, k2));
    }
}

CoveringFamily::QueryResult CoveringFamily::query(Coord i, Coord j) const {
    if (i > j) throw std::invalid_argument("CoveringFamily::query: i > j");
    auto find = [&](size_t idx) -> const Segment* {
        const Segment* s = pbst::find_first(levels_[idx].tree.get(),
                                            [&](const Segment& v) { return v.begin >= i; });
        if (s && s->end <= j) return s;
        return nullptr;
    };
    // Binary search for the largest succeeding level; succeeding is not
    // monotone across levels but every level below the true answer succeeds,
    // so the search never lands under it.
    size_t lo = 0, hi = levels_.size();  // lo==0 encodes the artificial empty level
    while (lo < hi) {
        size_t mid = (lo + hi + 1) / 2;
        if (find(mid - 1))
            lo = mid;
        else
            hi = mid - 1;
    }
    if (lo == 0) return QueryResult{0, nullptr};
    return QueryResult{levels_[lo - 1].score, find(lo - 1)};
}

std::vector<Segment> CoveringFamily::level_segments(size_t idx) const {
    std::vector<Segment> out;
    pbst::for_each(levels_[idx].tree.get(), [&](const Segment& s) { out.push_back(s); });
    return out;
}

}  // namespace dynlis
