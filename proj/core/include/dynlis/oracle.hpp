#pragma once

// Brute-force references used to validate everything else. None of this
// shares code with the structures it checks.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynlis/cover.hpp"
#include "dynlis/decremental.hpp"
#include "dynlis/script.hpp"
#include "dynlis/types.hpp"

namespace dynlis::oracle {

// Exact strict LIS, O(n^2) dynamic programming.
int64_t lis_dp(std::span<const int64_t> values);
int64_t lis_dp(const PointSet& points);

// Independent O(n log n) reference used where the quadratic DP is too slow;
// cross-checked against lis_dp by the test suite.
int64_t lis_ref(std::span<const int64_t> values);

struct CoverVerdict {
    bool ok = true;
    std::string message;
    Coord bad_i = 0, bad_j = 0;  // witness interval of the first violation

    explicit operator bool() const { return ok; }
};

// Checks that `segments` is a valid (k1,k2)-cover of `points`:
// (a) every interval with a chain of length >= k2 contains a segment inside
//     it, (b) no segment interval lies inside another, (c) every stored
//     chain is a strict chain of live points matching its interval with
//     score in [k1, k2].
CoverVerdict validate_cover(const PointSet& points, std::span<const Segment> segments, int64_t k1,
                            int64_t k2);

struct DifferentialReport {
    bool ok = true;
    std::string message;
    size_t failing_op = 0;      // index into ops of the first violation
    UpdateScript minimized;     // shrunk reproducer (when !ok)
    int64_t queries = 0;
    StructureStats stats;

    explicit operator bool() const { return ok; }
};

// Replays the script on DynamicLis (or DecrementalLis when it has no
// inserts) against a plain-array reference model, asserting the sandwich
// bound and chain validity at every query.
DifferentialReport differential_run(const UpdateScript& script, double eps,
                                    bool force_dynamic = false, AuditOptions audit = {});

}  // namespace dynlis::oracle
