#pragma once

// Deletion-only (1+eps)-approximate LIS with range queries: dyadic
// rectangles over [n]x[n], one covering family per nonempty rectangle,
// maintained through Merge with greedy sparsification.

#include <cstdint>
#include <memory>
#include <vector>

#include "dynlis/cover.hpp"
#include "dynlis/types.hpp"

namespace dynlis {

struct StructureStats {
    uint64_t merges = 0;
    uint64_t rejoins = 0;
    uint64_t level_builds = 0;
    uint64_t rebuilds = 0;
    int64_t max_merge_output = 0;
    int64_t merge_output_bound = 0;  // 6/eps' + 2
    uint64_t out_size_violations = 0;
    int64_t max_cover_depth = 0;    // audited covers only
    uint64_t depth_violations = 0;  // covers exceeding 1 + h*(6/eps'+2)
};

struct AuditOptions {
    bool check_depth = false;            // sweep rebuilt covers (test builds)
    bool disable_sparsification = false; // test hook: skip Merge step 2
};

class DecrementalLis {
  public:
    // points must be normalized: x == position, y a permutation of [n].
    DecrementalLis(const PointSet& points, double epsilon, AuditOptions audit = {});
    ~DecrementalLis();
    DecrementalLis(DecrementalLis&&) noexcept;
    DecrementalLis& operator=(DecrementalLis&&) noexcept;

    int64_t live() const;
    double epsilon() const;
    double eps_prime() const;
    // Scores up to this bound are maintained exactly.
    int64_t exact_threshold() const;

    // Deletes the element at a current index.
    void erase(int64_t current_index);
    // Deletes by original position; the element must still be live.
    void erase_original(Coord x);

    bool live_original(Coord x) const;
    int64_t position_of_original(Coord x) const;
    // Original position of the element currently at `position`.
    Coord original_at(int64_t position) const;

    // Approximate LIS of the current subarray [i, j]:
    // OPT/(1+eps) <= result <= OPT. An empty structure answers 0.
    int64_t query(int64_t i, int64_t j) const;

    struct ChainQuery {
        int64_t score = 0;
        Chain chain;  // live witness in original coordinates, length >= score
    };
    ChainQuery query_chain(int64_t i, int64_t j) const;

    const StructureStats& stats() const;

    // Test-only inspection of the maintained covers.
    struct DebugLevel {
        int64_t score = 0;
        double cap = 0;
        bool exact = false;
        bool merged = false;
        std::vector<Segment> segments;
    };
    struct DebugRect {
        Coord x1, y1, x2, y2;
        int height;
        int64_t live;
        std::vector<DebugLevel> levels;
    };
    std::vector<DebugRect> debug_snapshot() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace dynlis
