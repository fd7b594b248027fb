#pragma once

// Erdős–Szekeres partitioning: split a permutation into few monotone
// subsequences in near-linear time by repeatedly extracting approximate-LIS
// witnesses from the decremental structure, then partitioning what is left
// into decreasing subsequences.

#include <vector>

#include "dynlis/types.hpp"

namespace dynlis {

struct MonotonePart {
    bool increasing;
    Chain chain;  // increasing in y, or decreasing in y, always increasing in x
};

struct MonotonePartition {
    std::vector<MonotonePart> parts;
};

// At most 3*sqrt(n) parts: up to sqrt(n) extracted increasing subsequences
// of length >= sqrt(n) (via a 2-approximation), plus fewer than 2*sqrt(n)
// decreasing subsequences of the remainder.
MonotonePartition es_partition(const PointSet& perm);

// At most ceil((1+eps)*sqrt(2n)) parts: step i extracts an increasing
// subsequence of length >= sqrt(2n)-i while the (1+eps)-approximate length
// permits.
MonotonePartition es_partition_tight(const PointSet& perm, double eps);

}  // namespace dynlis
