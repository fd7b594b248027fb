#pragma once

// Shared machinery behind the decremental and fully dynamic structures:
// per-rectangle covering-family levels, the Merge procedure (candidate
// concatenation across a vertical split followed by greedy sparsification),
// integration of merge output with child cover trees under the
// non-inclusion invariant, level queries, and hit detection on stored
// chains.
//
// Points are 32-bit ids; the geometry G supplies coordinate order and
// liveness:
//   struct G { using P = uint32_t;
//              bool x_less(P,P) const; bool y_less(P,P) const;
//              bool is_live(P) const; };
//
// Level score 1 is implicit everywhere: a 1-cover is exactly the set of
// singleton segments of the live points, which the point tree of the
// rectangle already represents.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dynlis/cover_algo.hpp"
#include "dynlis/pbst.hpp"

namespace dynlis::detail {

using P32 = uint32_t;
using Seg = SegmentT<P32>;
using SegNode = pbst::Node<Seg>;
using PtNode = pbst::Node<P32>;

struct LevelSpec {
    int64_t score;    // k1: the value reported by queries
    double cap;       // k2: intervals holding a chain of ceil(cap) must be covered
    bool exact;       // k1 == k2, no slack allowed
    int64_t build_lo;  // greedy parameters for standalone (re)builds
    int64_t build_hi;
    int64_t merge_lo;  // greedy parameters for sparsification inside Merge
    int64_t merge_hi;  // also the chain trim length and the pairing target
    int32_t counter_cap;
};

// Level schedule of a (lambda^2, r)-covering family holding up to n_cap
// points: exact levels 2..min(K0, n_cap) (level 1 is implicit), then level
// K0+j is a (ceil(K0*lam^{2j}), K0*lam^{2(j+r-1)})-cover while the cap fits.
// With double_margin the standalone build covers down to cap/lambda so the
// level survives insertions as well as deletions.
inline std::vector<LevelSpec> make_schedule(int64_t K0, int r, int64_t n_cap, double lambda,
                                            double eps_prime, bool double_margin) {
    std::vector<LevelSpec> out;
    if (n_cap < 2) return out;
    const int64_t kexact = std::min<int64_t>(K0, n_cap);
    for (int64_t k = 2; k <= kexact; ++k)
        out.push_back(LevelSpec{k, double(k), true, k, k, k, k, 1});
    if (r < 1) return out;
    for (int64_t j = 1;; ++j) {
        const double k1r = double(K0) * std::pow(lambda, 2.0 * double(j));
        const double capr = double(K0) * std::pow(lambda, 2.0 * double(j + r - 1));
        if (capr > double(n_cap)) break;
        LevelSpec s;
        s.score = int64_t(std::ceil(k1r));
        s.cap = capr;
        s.exact = false;
        s.build_lo = int64_t(std::ceil(double(s.score) * lambda));
        s.build_hi = int64_t(std::ceil(double_margin ? capr / lambda : capr));
        const double target = double(K0) * std::pow(lambda, 2.0 * double(j) + 2.0);
        s.merge_lo = int64_t(std::ceil(target / lambda));
        s.merge_hi = int64_t(std::ceil(target));
        s.counter_cap = int32_t(std::max<int64_t>(1, int64_t(eps_prime * double(s.score)) - 1));
        if (s.build_hi <= s.build_lo) s.build_hi = s.build_lo + 1;
        out.push_back(s);
    }
    return out;
}

struct LevelState {
    pbst::Ref<Seg> tree;
    std::vector<Seg> out;  // segments from the last Merge (crossing + two flanks)
    bool merged = false;   // false while the cover still comes from a standalone build
    int32_t counter = 0;
    uint64_t version = 0;   // bumped whenever the stored tree changes
    uint64_t seen_l = ~0ull;  // child level versions used by the last rejoin
    uint64_t seen_r = ~0ull;
    uint64_t seen_out = 0;  // out epoch used by the last rejoin
    uint64_t out_epoch = 0;
    // Gate state: bounds and version sum of the child levels the last merge
    // read. While these are unchanged the merge would reproduce itself.
    int64_t g_lo = -2, g_hi = -2;
    uint64_t g_sum = 0;
    bool g_valid = false;
};

// One rectangle's covering family. `pts` (the implicit level 1) is owned by
// the rectangle and must be refreshed by the owner before engine calls.
struct Family {
    std::vector<LevelSpec> spec;
    std::vector<LevelState> lvl;
    const PtNode* pts = nullptr;
    int64_t top_exact = 0;   // largest exact score with a nonempty cover (1 = points only)
    int64_t max_exact = 1;   // largest exact score in the schedule
    uint64_t ver1 = 0;       // version of the implicit level 1
};

inline void init_max_exact(Family& f) {
    f.max_exact = 1;
    for (const LevelSpec& s : f.spec) {
        if (!s.exact) break;
        f.max_exact = s.score;
    }
}

struct FamilyRef {
    Family* fam = nullptr;  // null means an empty rectangle
};

// x-interval of a secondary rectangle in the dynamic structure. A segment
// survives the merge filter only when its chain stays inside the window.
struct Window {
    P32 lo = 0, hi = 0;
    bool has_lo = false, has_hi = false;  // guards are unbounded
    bool lo_strict = true;                // x > lo vs x >= lo
};

inline int64_t top_score(const FamilyRef& f) { return f.fam ? f.fam->top_exact : 0; }

inline int spec_index(const Family& fam, int64_t score) {
    // Levels are sorted by score; exact prefix is dense from 2.
    size_t lo = 0, hi = fam.spec.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (fam.spec[mid].score < score)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < fam.spec.size() && fam.spec[lo].score == score) return int(lo);
    return -1;
}

template <class G>
class CoverEngine {
  public:
    struct Config {
        double lambda = 1.5;
        double eps_prime = 0.5;
        int64_t K0 = 6;
        bool disable_sparsify = false;  // test hook: skip Merge step 2
        bool audit = false;             // depth sweeps on rebuilt covers
    };
    struct Stats {
        uint64_t merges = 0;
        uint64_t rejoins = 0;
        uint64_t level_builds = 0;
        int64_t max_out = 0;
        int64_t max_cover_depth = 0;
        uint64_t depth_violations = 0;
    };

    CoverEngine(G g, Config c) : g_(g), cfg_(c) {}

    const Config& config() const { return cfg_; }
    Config& config() { return cfg_; }
    Stats& stats() { return stats_; }
    pbst::Pool<Seg>& seg_pool() { return segs_; }
    const G& geom() const { return g_; }
    void set_geom(G g) { g_ = g; }

    uint64_t next_version() { return ++version_clock_; }

    // ---- standalone level construction -----------------------------------

    pbst::Ref<Seg> build_level(std::span<const P32> pts, const LevelSpec& s, int64_t lis_bound) {
        ++stats_.level_builds;
        if (s.build_hi > lis_bound) return pbst::Ref<Seg>(&segs_, nullptr);
        auto raw = greedy_cover(pts, s.build_lo, s.build_hi, g_);
        return pbst::Ref<Seg>(&segs_, pbst::build_sorted(segs_, raw.data(), raw.size()));
    }

    // ---- merge ------------------------------------------------------------

    // Both steps of Merge for one level across the split at xm: concatenate
    // candidate pairs from the bottom/top families, sparsify them with the
    // greedy cover, keep the crossing segments plus the two closest
    // non-crossing ones, and drop anything leaving the window.
    std::vector<Seg> merge(const FamilyRef& fb, const FamilyRef& ft, P32 xm, const LevelSpec& s,
                           const Window* win) {
        ++stats_.merges;
        cand_.clear();
        if (s.exact) {
            const int64_t k = s.merge_hi;
            const int64_t topB = top_score(fb), topT = top_score(ft);
            const int64_t lo = std::max<int64_t>(0, k - topT);
            const int64_t hi = std::min<int64_t>(k, topB);
            for (int64_t r1 = lo; r1 <= hi; ++r1)
                gen_pair(fb, ft, r1, k - r1, xm, k, /*live_filter=*/false);
        } else {
            const int64_t k = s.merge_hi;
            // Bottom score 0 pairs with the smallest top level reaching k.
            gen_pair(fb, ft, 0, smallest_score_at_least(ft, k), xm, k, true);
            if (fb.fam) {
                if (fb.fam->pts) try_pairing(fb, ft, 1, k, xm);
                for (const LevelSpec& bs : fb.fam->spec) try_pairing(fb, ft, bs.score, k, xm);
            }
        }

        std::vector<Seg> result;
        if (cfg_.disable_sparsify) {
            result.reserve(cand_.size());
            for (auto& c : cand_)
                result.push_back(Seg{c->front(), c->back(),
                                     std::shared_ptr<const std::vector<P32>>(std::move(c))});
            std::sort(result.begin(), result.end(),
                      [&](const Seg& a, const Seg& b) { return g_.x_less(a.begin, b.begin); });
        } else {
            pool_pts_.clear();
            for (const auto& c : cand_) pool_pts_.insert(pool_pts_.end(), c->begin(), c->end());
            std::sort(pool_pts_.begin(), pool_pts_.end(),
                      [&](P32 a, P32 b) { return g_.x_less(a, b); });
            pool_pts_.erase(std::unique(pool_pts_.begin(), pool_pts_.end()), pool_pts_.end());
            result = greedy_cover(std::span<const P32>(pool_pts_), s.merge_lo, s.merge_hi, g_);
        }

        // Keep only segments crossing xm and the two non-crossing closest.
        std::vector<Seg> kept;
        int last_left = -1;
        bool took_right = false;
        for (size_t i = 0; i < result.size(); ++i) {
            const Seg& c = result[i];
            if (g_.x_less(c.end, xm)) {
                last_left = int(i);
            } else if (g_.x_less(c.begin, xm)) {
                if (last_left >= 0) {
                    kept.push_back(result[last_left]);
                    last_left = -1;
                }
                kept.push_back(c);
            } else {
                if (last_left >= 0) {
                    kept.push_back(result[last_left]);
                    last_left = -1;
                }
                if (!took_right) {
                    kept.push_back(c);
                    took_right = true;
                }
                break;
            }
        }
        if (last_left >= 0) kept.push_back(result[last_left]);
        if (win) {
            std::erase_if(kept, [&](const Seg& c) { return !in_window(*win, c); });
        }
        stats_.max_out = std::max(stats_.max_out, int64_t(kept.size()));
        return kept;
    }

    // ---- rejoin -----------------------------------------------------------

    // Cover tree of a level: join of the child trees plus the merge output,
    // deleting whichever segment of an inclusion pair has the larger
    // interval.
    pbst::Ref<Seg> rejoin(const SegNode* left, const SegNode* right, std::span<const Seg> out) {
        ++stats_.rejoins;
        SegNode* t = pbst::join(segs_, const_cast<SegNode*>(left), const_cast<SegNode*>(right));
        for (const Seg& s : out) {
            // A tree segment inside s makes s redundant.
            const Seg* in = pbst::find_first(
                t, [&](const Seg& v) { return !g_.x_less(v.begin, s.begin); });
            if (in && !g_.x_less(s.end, in->end)) continue;
            // Tree segments containing s are deleted (contiguous run).
            const Seg* container =
                pbst::find_last(t, [&](const Seg& v) { return !g_.x_less(s.begin, v.begin); });
            if (container && !g_.x_less(container->end, s.end)) {
                SegNode* t2 = pbst::erase_run(
                    segs_, t, [&](const Seg& v) { return g_.x_less(v.end, s.end); },
                    [&](const Seg& v) { return !g_.x_less(s.begin, v.begin); });
                segs_.release(t);
                t = t2;
            }
            SegNode* t3 = pbst::insert(segs_, t, s, [&](const Seg& a, const Seg& b) {
                return g_.x_less(a.begin, b.begin);
            });
            segs_.release(t);
            t = t3;
        }
        return pbst::Ref<Seg>(&segs_, t);
    }

    // ---- queries ----------------------------------------------------------

    struct QueryOut {
        int64_t score = 0;
        bool found = false;
        Seg seg;  // synthesized singleton for the implicit level
    };

    // Largest level holding a segment inside [lo, hi]; reports that level's
    // score, never the stored chain length.
    QueryOut query(const FamilyRef& f, P32 lo, P32 hi) const {
        QueryOut qr;
        if (!f.fam) return qr;
        const Family& fam = *f.fam;
        auto probe = [&](int64_t idx, Seg* hit) -> bool {
            if (idx == 0) {
                const P32* p =
                    pbst::find_first(fam.pts, [&](P32 v) { return !g_.x_less(v, lo); });
                if (p && !g_.x_less(hi, *p)) {
                    if (hit) *hit = make_singleton(*p);
                    return true;
                }
                return false;
            }
            const LevelState& st = fam.lvl[size_t(idx - 1)];
            const Seg* s = pbst::find_first(
                st.tree.get(), [&](const Seg& v) { return !g_.x_less(v.begin, lo); });
            if (s && !g_.x_less(hi, s->end)) {
                if (hit) *hit = *s;
                return true;
            }
            return false;
        };
        // Binary search over levels; every level below the optimum succeeds,
        // so the search can only return it or a larger succeeding level.
        int64_t best = -1;
        int64_t lo_i = -1, hi_i = int64_t(fam.lvl.size());
        while (lo_i < hi_i) {
            int64_t mid = (lo_i + hi_i + 1) / 2;
            if (probe(mid, nullptr)) {
                lo_i = mid;
            } else {
                hi_i = mid - 1;
            }
        }
        best = lo_i;
        if (best < 0) return qr;
        qr.found = probe(best, &qr.seg);
        qr.score = best == 0 ? 1 : fam.spec[size_t(best - 1)].score;
        return qr;
    }

    // ---- hit detection ----------------------------------------------------

    // Whether p lies on a chain stored by this level (its own merge output,
    // or the whole standalone tree when no merge happened yet).
    bool level_hit(const LevelState& st, P32 p) const {
        if (st.merged) {
            for (const Seg& s : st.out)
                if (seg_contains(s, p)) return true;
            return false;
        }
        bool hit = false;
        pbst::for_each_between(
            st.tree.get(), [&](const Seg& v) { return g_.x_less(v.end, p); },
            [&](const Seg& v) { return g_.x_less(p, v.begin); },
            [&](const Seg& v) {
                if (seg_contains(v, p)) {
                    hit = true;
                    return false;
                }
                return true;
            });
        return hit;
    }

    // ---- audit helpers ----------------------------------------------------

    int64_t tree_depth(const SegNode* t) const {
        std::vector<Seg> all;
        all.reserve(pbst::size(t));
        pbst::for_each(t, [&](const Seg& s) { all.push_back(s); });
        return interval_depth(std::span<const Seg>(all),
                              [&](P32 a, P32 b) { return g_.x_less(a, b); });
    }

    void audit_cover_depth(const SegNode* t, int64_t bound) {
        int64_t d = tree_depth(t);
        stats_.max_cover_depth = std::max(stats_.max_cover_depth, d);
        if (d > bound) ++stats_.depth_violations;
    }

    Seg make_singleton(P32 p) const {
        auto chain = std::make_shared<std::vector<P32>>(1, p);
        return Seg{p, p, std::move(chain)};
    }

  private:
    struct Cursor {
        const SegNode* tree = nullptr;
        const PtNode* pts = nullptr;
        bool implicit = false;
        bool empty = true;
    };

    bool seg_contains(const Seg& s, P32 p) const {
        if (g_.x_less(p, s.begin) || g_.x_less(s.end, p)) return false;
        const auto& c = *s.chain;
        size_t lo = 0, hi = c.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (g_.x_less(c[mid], p))
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo < c.size() && c[lo] == p;
    }

    bool in_window(const Window& w, const Seg& s) const {
        if (w.has_lo) {
            if (w.lo_strict) {
                if (!g_.x_less(w.lo, s.begin)) return false;
            } else if (g_.x_less(s.begin, w.lo)) {
                return false;
            }
        }
        if (w.has_hi && !g_.x_less(s.end, w.hi)) return false;
        return true;
    }

    int64_t smallest_score_at_least(const FamilyRef& f, int64_t need) const {
        if (!f.fam) return -1;
        if (need <= 1) return f.fam->pts ? 1 : -1;
        const auto& spec = f.fam->spec;
        size_t lo = 0, hi = spec.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (spec[mid].score < need)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo == spec.size()) return -1;
        return spec[lo].score;
    }

    Cursor cursor_for(const FamilyRef& f, int64_t score) const {
        Cursor c;
        if (!f.fam || score <= 0) return c;
        if (score == 1) {
            c.implicit = true;
            c.pts = f.fam->pts;
            c.empty = c.pts == nullptr;
            return c;
        }
        int idx = spec_index(*f.fam, score);
        if (idx < 0) return c;
        c.tree = f.fam->lvl[size_t(idx)].tree.get();
        c.empty = c.tree == nullptr;
        return c;
    }

    void try_pairing(const FamilyRef& fb, const FamilyRef& ft, int64_t s_b, int64_t k, P32 xm) {
        Cursor cb = cursor_for(fb, s_b);
        if (cb.empty) return;
        if (s_b >= k) {
            gen_pair(fb, ft, s_b, 0, xm, k, true);
            return;
        }
        int64_t s_t = smallest_score_at_least(ft, k - s_b);
        if (s_t < 0) return;
        gen_pair(fb, ft, s_b, s_t, xm, k, true);
    }

    std::optional<Seg> first_starting_after(const Cursor& c, P32 x) const {
        if (c.implicit) {
            const P32* p = pbst::find_first(c.pts, [&](P32 v) { return g_.x_less(x, v); });
            return p ? std::optional<Seg>(make_singleton(*p)) : std::nullopt;
        }
        const Seg* s =
            pbst::find_first(c.tree, [&](const Seg& v) { return g_.x_less(x, v.begin); });
        return s ? std::optional<Seg>(*s) : std::nullopt;
    }

    std::optional<Seg> last_ending_before(const Cursor& c, P32 x) const {
        if (c.implicit) {
            const P32* p = pbst::find_last(c.pts, [&](P32 v) { return g_.x_less(v, x); });
            return p ? std::optional<Seg>(make_singleton(*p)) : std::nullopt;
        }
        const Seg* s = pbst::find_last(c.tree, [&](const Seg& v) { return g_.x_less(v.end, x); });
        return s ? std::optional<Seg>(*s) : std::nullopt;
    }

    // Visits the rightmost segment left of xm, every segment crossing xm,
    // and the leftmost segment at or right of xm, in cover order.
    template <class Fn>
    void run_near_split(const Cursor& c, P32 xm, const Fn& fn) const {
        if (c.empty) return;
        if (auto s = last_ending_before(c, xm)) fn(*s);
        if (c.implicit) {
            const P32* p = pbst::find_first(c.pts, [&](P32 v) { return !g_.x_less(v, xm); });
            if (p) fn(make_singleton(*p));
            return;
        }
        pbst::for_each_between(
            c.tree, [&](const Seg& v) { return g_.x_less(v.end, xm); },
            [&](const Seg&) { return false; },
            [&](const Seg& v) {
                fn(v);
                return g_.x_less(v.begin, xm);  // stop after the first fully-right segment
            });
    }

    void add_candidate(const Seg* u, const Seg* u2, int64_t trim, bool live_filter) {
        auto chain = std::make_unique<std::vector<P32>>();
        chain->reserve(size_t(std::min<int64_t>(
            trim, (u ? int64_t(u->chain->size()) : 0) + (u2 ? int64_t(u2->chain->size()) : 0))));
        auto push = [&](const std::vector<P32>& src) {
            for (P32 p : src) {
                if (int64_t(chain->size()) >= trim) break;
                if (live_filter && !g_.is_live(p)) continue;
                chain->push_back(p);
            }
        };
        if (u) push(*u->chain);
        if (u2 && int64_t(chain->size()) < trim) push(*u2->chain);
        if (!chain->empty()) cand_.push_back(std::move(chain));
    }

    void gen_pair(const FamilyRef& fb, const FamilyRef& ft, int64_t s_b, int64_t s_t, P32 xm,
                  int64_t trim, bool live_filter) {
        Cursor cb = cursor_for(fb, s_b);
        Cursor ct = cursor_for(ft, s_t);
        const bool b_zero = (s_b == 0);
        const bool t_zero = (s_t == 0);
        if (b_zero && t_zero) return;
        if (b_zero) {
            if (ct.empty) return;
            run_near_split(ct, xm, [&](const Seg& u2) { add_candidate(nullptr, &u2, trim, live_filter); });
            return;
        }
        if (t_zero) {
            if (cb.empty) return;
            run_near_split(cb, xm, [&](const Seg& u) { add_candidate(&u, nullptr, trim, live_filter); });
            return;
        }
        if (cb.empty || ct.empty) return;
        run_near_split(cb, xm, [&](const Seg& u) {
            if (auto u2 = first_starting_after(ct, u.end)) add_candidate(&u, &*u2, trim, live_filter);
        });
        run_near_split(ct, xm, [&](const Seg& u2) {
            if (auto u = last_ending_before(cb, u2.begin)) add_candidate(&*u, &u2, trim, live_filter);
        });
    }

    G g_;
    Config cfg_;
    Stats stats_;
    pbst::Pool<Seg> segs_;
    uint64_t version_clock_ = 0;
    // merge scratch
    std::vector<std::unique_ptr<std::vector<P32>>> cand_;
    std::vector<P32> pool_pts_;
};

}  // namespace dynlis::detail
