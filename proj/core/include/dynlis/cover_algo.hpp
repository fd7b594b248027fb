#pragma once

// Greedy construction of covers.
//
// A (k1,k2)-cover stores segments (begin, end, chain) such that every
// interval containing a chain of length k2 contains a stored segment whose
// chain has length at least k1, no stored interval lies inside another, and
// begins/ends are sorted simultaneously.
//
// Both variants repeatedly take the shortest prefix of the remaining array
// holding a chain of length k2, shrink it to the shortest suffix still
// holding a chain of length k1, and emit that suffix with its witness. The
// exact variant (k1 == k2) then advances past the suffix start; the
// approximate variant restarts at it. The resulting depth is at most k for
// the exact variant and k1/(k2-k1) for the approximate one.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dynlis/patience.hpp"

namespace dynlis {

template <class P>
struct SegmentT {
    P begin{};  // first chain element
    P end{};    // last chain element
    std::shared_ptr<const std::vector<P>> chain;

    int64_t score() const { return chain ? int64_t(chain->size()) : 0; }
};

namespace detail {

template <class G>
struct GeomYLess {
    const G* g;
    bool operator()(const typename G::P& a, const typename G::P& b) const {
        return g->y_less(a, b);
    }
};

}  // namespace detail

// Shared greedy sweep; exact ⇔ k1 == k2 (selects the i ← q+1 advance).
template <class G>
std::vector<SegmentT<typename G::P>> greedy_cover(std::span<const typename G::P> pts, int64_t k1,
                                                  int64_t k2, const G& g) {
    using P = typename G::P;
    using YL = detail::GeomYLess<G>;
    const bool exact = (k1 == k2);
    std::vector<SegmentT<P>> out;
    if (k1 < 1) return out;
    const int64_t n = int64_t(pts.size());
    PatienceLis<P, YL> pre(YL{&g});
    SuffixLis<P, YL> suf(YL{&g});
    int64_t i = 0;
    while (i < n) {
        pre.clear();
        int64_t j = i - 1;
        int64_t len = 0;
        while (len < k2 && j + 1 < n) len = pre.append(pts[++j]);
        if (len < k2) break;  // no further chain of length k2
        suf.clear();
        int64_t q = j + 1;
        int64_t rlen = 0;
        while (rlen < k1) rlen = suf.push_front(pts[--q]);
        auto chain = std::make_shared<std::vector<P>>(suf.witness());
        out.push_back(SegmentT<P>{chain->front(), chain->back(), std::move(chain)});
        i = exact ? q + 1 : q;
    }
    return out;
}

// Maximum number of stored intervals sharing an x-coordinate.
template <class P, class XLess>
int64_t interval_depth(std::span<const SegmentT<P>> segs, const XLess& xless) {
    if (segs.empty()) return 0;
    std::vector<P> begins, ends;
    begins.reserve(segs.size());
    ends.reserve(segs.size());
    for (const auto& s : segs) {
        begins.push_back(s.begin);
        ends.push_back(s.end);
    }
    std::sort(begins.begin(), begins.end(), xless);
    std::sort(ends.begin(), ends.end(), xless);
    // Depth is maximized at some begin b: intervals opened up to b minus
    // intervals closed strictly before b.
    int64_t best = 0;
    size_t closed = 0;
    for (size_t i = 0; i < begins.size(); ++i) {
        while (closed < ends.size() && xless(ends[closed], begins[i])) ++closed;
        best = std::max(best, int64_t(i + 1 - closed));
    }
    return best;
}

}  // namespace dynlis
