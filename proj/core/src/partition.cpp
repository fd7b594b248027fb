#include "dynlis/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "dynlis/core.hpp"
#include "dynlis/decremental.hpp"

namespace dynlis {

namespace {

void check_permutation(const PointSet& perm) {
    const size_t n = perm.size();
    std::vector<uint8_t> seen(n, 0);
    for (size_t i = 0; i < n; ++i) {
        const Point& p = perm.points[i];
        if (p.x != Coord(i) || p.y < 0 || p.y >= Coord(n) || seen[size_t(p.y)])
            throw std::invalid_argument("es_partition: input is not a permutation of [n]");
        seen[size_t(p.y)] = 1;
    }
}

void extract_chain(DecrementalLis& dec, MonotonePartition& out) {
    auto qc = dec.query_chain(0, dec.live() - 1);
    Chain chain = std::move(qc.chain);
    for (const Point& p : chain) dec.erase_original(p.x);
    out.parts.push_back(MonotonePart{true, std::move(chain)});
}

void partition_remainder(const DecrementalLis& dec, const PointSet& perm, MonotonePartition& out) {
    PointSet rest;
    for (const Point& p : perm.points)
        if (dec.live_original(p.x)) rest.points.push_back(p);
    for (Chain& part : decreasing_partition(rest))
        out.parts.push_back(MonotonePart{false, std::move(part)});
}

}  // namespace

MonotonePartition es_partition(const PointSet& perm) {
    check_permutation(perm);
    MonotonePartition out;
    const int64_t n = int64_t(perm.size());
    if (n == 0) return out;
    DecrementalLis dec(perm, 1.0);  // a 2-approximation suffices here
    while (dec.live() > 0) {
        int64_t score = dec.query(0, dec.live() - 1);
        if (score * score < n) break;  // reported length under sqrt(n)
        extract_chain(dec, out);
    }
    partition_remainder(dec, perm, out);
    return out;
}

MonotonePartition es_partition_tight(const PointSet& perm, double eps) {
    check_permutation(perm);
    if (!(eps > 0.0)) throw std::invalid_argument("es_partition_tight: eps must be positive");
    MonotonePartition out;
    const int64_t n = int64_t(perm.size());
    if (n == 0) return out;
    const double s = std::sqrt(2.0 * double(n));
    DecrementalLis dec(perm, std::min(eps, 1.0));
    int64_t step = 0;
    while (dec.live() > 0) {
        const double threshold = s - double(step);
        int64_t score = dec.query(0, dec.live() - 1);
        if (double(score) < threshold) break;
        extract_chain(dec, out);
        ++step;
    }
    partition_remainder(dec, perm, out);
    return out;
}

}  // namespace dynlis
