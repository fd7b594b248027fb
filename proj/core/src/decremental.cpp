#include "dynlis/decremental.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "dynlis/detail/cover_engine.hpp"

namespace dynlis {

namespace {

using detail::Family;
using detail::FamilyRef;
using detail::LevelSpec;
using detail::LevelState;
using detail::P32;
using detail::Seg;

struct DecGeom {
    using P = P32;
    const Coord* y_of = nullptr;
    const uint8_t* dead = nullptr;
    bool x_less(P a, P b) const { return a < b; }
    bool y_less(P a, P b) const { return y_of[a] < y_of[b]; }
    bool is_live(P a) const { return !dead[a]; }
};

uint64_t rect_key(uint32_t kx, uint32_t ix, uint32_t ky, uint32_t iy) {
    return (uint64_t(kx) << 58) | (uint64_t(ky) << 52) | (uint64_t(ix) << 26) | uint64_t(iy);
}

}  // namespace

struct DecrementalLis::Impl {
    using Engine = detail::CoverEngine<DecGeom>;

    double eps, epsp, lambda;
    int64_t K0;
    uint32_t n = 0, n_pad = 2;
    int logn = 1;
    int64_t live_total = 0;
    AuditOptions audit;

    std::vector<Coord> ys;      // y by original position
    std::vector<uint8_t> dead;  // global deleted flags by original position

    pbst::Pool<P32> pt_pool;
    std::unique_ptr<Engine> engine;

    struct Rect {
        uint8_t kx, ky;
        uint32_t ix, iy;
        int64_t live = 0;
        pbst::Ref<P32> pts;
        Family fam;
        Rect *l = nullptr, *r = nullptr, *b = nullptr, *t = nullptr;

        P32 xm() const {
            assert(kx >= 1);  // rectangles with >= 2 points span >= 2 columns
            return P32(ix << kx | (1u << (kx - 1)));
        }
    };
    std::unordered_map<uint64_t, std::unique_ptr<Rect>> rects;
    Rect* root = nullptr;

    StructureStats st;

    Impl(const PointSet& points, double epsilon, AuditOptions a) : audit(a) {
        if (!(epsilon > 0.0) || epsilon > 1.0)
            throw std::invalid_argument("DecrementalLis: epsilon must be in (0, 1]");
        n = uint32_t(points.size());
        if (n > (1u << 25)) throw std::invalid_argument("DecrementalLis: input too large");
        for (uint32_t i = 0; i < n; ++i)
            if (points.points[i].x != Coord(i))
                throw std::invalid_argument("DecrementalLis: points must be normalized (x == index)");
        eps = epsilon;
        n_pad = std::max<uint32_t>(2, std::bit_ceil(std::max<uint32_t>(1, n)));
        logn = std::countr_zero(n_pad);
        epsp = eps / (8.0 * double(logn));
        lambda = 1.0 + epsp;
        K0 = int64_t(std::ceil(3.0 / epsp));
        live_total = n;
        st.merge_output_bound = int64_t(std::ceil(6.0 / epsp)) + 2;

        ys.assign(n, 0);
        std::vector<uint8_t> seen(n, 0);
        for (uint32_t i = 0; i < n; ++i) {
            Coord y = points.points[i].y;
            if (y < 0 || y >= Coord(n) || seen[size_t(y)])
                throw std::invalid_argument("DecrementalLis: y must be a permutation of [n]");
            seen[size_t(y)] = 1;
            ys[i] = y;
        }
        dead.assign(n, 0);
        engine = std::make_unique<Engine>(
            DecGeom{ys.data(), dead.data()},
            Engine::Config{lambda, epsp, K0, audit.disable_sparsification, audit.check_depth});
        if (n == 0) return;
        build();
    }

    // ---- construction ------------------------------------------------------

    void build() {
        // Full-width (kx == logn) point lists per horizontal dyadic slab; the
        // x-sorted point list of any rectangle is a contiguous slice of the
        // slab list of its y-interval.
        std::vector<std::vector<P32>> slab(size_t(logn) + 1);  // slab[ky] concatenated by iy
        std::vector<std::vector<uint32_t>> slab_off(size_t(logn) + 1);
        // ky == logn: a single slab holding everything, x-sorted.
        for (int ky = 0; ky <= logn; ++ky) {
            uint32_t groups = n_pad >> ky;
            slab_off[size_t(ky)].assign(groups + 1, 0);
        }
        for (uint32_t x = 0; x < n; ++x)
            for (int ky = 0; ky <= logn; ++ky)
                ++slab_off[size_t(ky)][(uint32_t(ys[x]) >> ky) + 1];
        for (int ky = 0; ky <= logn; ++ky) {
            auto& off = slab_off[size_t(ky)];
            for (size_t g = 1; g < off.size(); ++g) off[g] += off[g - 1];
            slab[size_t(ky)].resize(n);
        }
        {
            std::vector<std::vector<uint32_t>> cur = slab_off;
            for (uint32_t x = 0; x < n; ++x)
                for (int ky = 0; ky <= logn; ++ky)
                    slab[size_t(ky)][cur[size_t(ky)][uint32_t(ys[x]) >> ky]++] = x;
        }

        for (int ky = 0; ky <= logn; ++ky) {
            uint32_t ny = n_pad >> ky;
            for (uint32_t iy = 0; iy < ny; ++iy) {
                const auto& off = slab_off[size_t(ky)];
                const P32* base = slab[size_t(ky)].data() + off[iy];
                uint32_t m_slab = off[iy + 1] - off[iy];
                if (m_slab == 0) continue;
                for (int kx = 0; kx <= logn; ++kx) {
                    // Walk the slab once, slicing runs of equal x >> kx.
                    uint32_t lo = 0;
                    while (lo < m_slab) {
                        uint32_t ix = base[lo] >> kx;
                        uint32_t hi = lo + 1;
                        while (hi < m_slab && (base[hi] >> kx) == ix) ++hi;
                        make_rect(kx, ix, ky, iy, std::span<const P32>(base + lo, hi - lo));
                        lo = hi;
                    }
                }
            }
        }
        // Children pointers.
        for (auto& [key, rp] : rects) {
            Rect& rc = *rp;
            if (rc.kx > 0) {
                rc.l = find_rect(rc.kx - 1, rc.ix * 2, rc.ky, rc.iy);
                rc.r = find_rect(rc.kx - 1, rc.ix * 2 + 1, rc.ky, rc.iy);
            }
            if (rc.ky > 0) {
                rc.b = find_rect(rc.kx, rc.ix, rc.ky - 1, rc.iy * 2);
                rc.t = find_rect(rc.kx, rc.ix, rc.ky - 1, rc.iy * 2 + 1);
            }
        }
        root = find_rect(logn, 0, logn, 0);
    }

    void make_rect(int kx, uint32_t ix, int ky, uint32_t iy, std::span<const P32> pts) {
        auto rp = std::make_unique<Rect>();
        Rect& rc = *rp;
        rc.kx = uint8_t(kx);
        rc.ky = uint8_t(ky);
        rc.ix = ix;
        rc.iy = iy;
        rc.live = int64_t(pts.size());
        rc.pts = pbst::Ref<P32>(&pt_pool, pbst::build_sorted(pt_pool, pts.data(), pts.size()));
        rc.fam.pts = rc.pts.get();
        int64_t lis = rect_lis(pts);
        rc.fam.spec = detail::make_schedule(K0, 2 * ky, rc.live, lambda, epsp, false);
        detail::init_max_exact(rc.fam);
        rc.fam.lvl.resize(rc.fam.spec.size());
        for (size_t i = 0; i < rc.fam.spec.size(); ++i) {
            const LevelSpec& s = rc.fam.spec[i];
            rc.fam.lvl[i].version = engine->next_version();
            if (s.score > lis) continue;  // empty level
            rc.fam.lvl[i].tree = engine->build_level(pts, s, lis);
        }
        rc.fam.top_exact = std::min<int64_t>(lis, std::min<int64_t>(K0, rc.live));
        rects.emplace(rect_key(uint32_t(kx), ix, uint32_t(ky), iy), std::move(rp));
    }

    int64_t rect_lis(std::span<const P32> pts) const {
        std::vector<Coord> tops;
        for (P32 p : pts) {
            Coord y = ys[p];
            size_t lo = 0, hi = tops.size();
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (tops[mid] < y)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            if (lo == tops.size())
                tops.push_back(y);
            else
                tops[lo] = y;
        }
        return int64_t(tops.size());
    }

    Rect* find_rect(int kx, uint32_t ix, int ky, uint32_t iy) {
        auto it = rects.find(rect_key(uint32_t(kx), ix, uint32_t(ky), iy));
        return it == rects.end() ? nullptr : it->second.get();
    }

    // ---- deletion ----------------------------------------------------------

    void erase_by_x(P32 x) {
        dead[x] = 1;
        --live_total;
        uint32_t y = uint32_t(ys[x]);
        // Smallest to biggest: increasing y-span, then increasing x-span.
        for (int ky = 0; ky <= logn; ++ky) {
            for (int kx = 0; kx <= logn; ++kx) {
                Rect* rc = find_rect(kx, x >> kx, ky, y >> ky);
                if (rc) process_delete(*rc, x);
            }
        }
    }

    void process_delete(Rect& rc, P32 x) {
        if (rc.live == 0) return;
        --rc.live;
        rc.pts = pbst::Ref<P32>(&pt_pool, pbst::erase(pt_pool, rc.pts.get(), x,
                                                      [](P32 a, P32 b) { return a < b; }));
        rc.fam.pts = rc.pts.get();
        rc.fam.ver1 = engine->next_version();
        if (rc.live == 0) {
            for (auto& lv : rc.fam.lvl) {
                lv.tree.reset();
                lv.out.clear();
                lv.merged = false;
                lv.counter = 0;
                lv.version = engine->next_version();
            }
            rc.fam.top_exact = 0;
            return;
        }
        // Merge a level as soon as one of its own stored chains loses a
        // point: deletions cannot create chains, so an untouched cover stays
        // a valid one.
        for (size_t i = 0; i < rc.fam.spec.size(); ++i) {
            const LevelSpec& s = rc.fam.spec[i];
            LevelState& lv = rc.fam.lvl[i];
            if (lv.merged ? lv.out.empty() : !lv.tree) continue;  // nothing stored
            if (!engine->level_hit(lv, x)) continue;
            if (s.exact) {
                remerge(rc, i);
            } else if (++lv.counter >= s.counter_cap) {
                remerge(rc, i);
            }
        }
        refresh_joins(rc);
        refresh_top(rc);
    }

    void remerge(Rect& rc, size_t idx) {
        const LevelSpec& s = rc.fam.spec[idx];
        LevelState& lv = rc.fam.lvl[idx];
        FamilyRef fb{rc.b ? &rc.b->fam : nullptr};
        FamilyRef ft{rc.t ? &rc.t->fam : nullptr};
        lv.out = engine->merge(fb, ft, rc.xm(), s, nullptr);
        if (int64_t(lv.out.size()) > st.merge_output_bound) ++st.out_size_violations;
        lv.merged = true;
        ++lv.out_epoch;
        lv.counter = 0;
    }

    // Rebuild the cover tree of every merged level whose inputs changed:
    // join the child trees, integrate the last merge output.
    void refresh_joins(Rect& rc) {
        for (size_t i = 0; i < rc.fam.spec.size(); ++i) {
            LevelState& lv = rc.fam.lvl[i];
            if (!lv.merged) continue;
            const int64_t score = rc.fam.spec[i].score;
            const LevelState* cl = child_level(rc.l, score);
            const LevelState* cr = child_level(rc.r, score);
            const uint64_t vl = cl ? cl->version : 0;
            const uint64_t vr = cr ? cr->version : 0;
            if (vl == lv.seen_l && vr == lv.seen_r && lv.seen_out == lv.out_epoch) continue;
            lv.tree = engine->rejoin(cl ? cl->tree.get() : nullptr, cr ? cr->tree.get() : nullptr,
                                     std::span<const Seg>(lv.out));
            lv.version = engine->next_version();
            lv.seen_l = vl;
            lv.seen_r = vr;
            lv.seen_out = lv.out_epoch;
            if (audit.check_depth)
                engine->audit_cover_depth(lv.tree.get(),
                                          1 + int64_t(rc.ky) * (st.merge_output_bound));
        }
    }

    static const LevelState* child_level(Rect* child, int64_t score) {
        if (!child || child->live == 0) return nullptr;
        int idx = detail::spec_index(child->fam, score);
        if (idx < 0) return nullptr;
        return &child->fam.lvl[size_t(idx)];
    }

    void refresh_top(Rect& rc) {
        int64_t top = rc.fam.top_exact;
        if (top > rc.fam.max_exact) top = rc.fam.max_exact;
        while (top >= 2) {
            int idx = detail::spec_index(rc.fam, top);
            if (idx >= 0 && rc.fam.lvl[size_t(idx)].tree) break;
            --top;
        }
        if (top <= 1) top = rc.live > 0 ? 1 : 0;
        rc.fam.top_exact = top;
    }

    // ---- queries -----------------------------------------------------------

    P32 original_at(int64_t pos) const {
        const P32* p = root ? pbst::at_rank(root->pts.get(), uint32_t(pos)) : nullptr;
        if (!p) throw std::out_of_range("DecrementalLis: position out of range");
        return *p;
    }

    Engine::QueryOut raw_query(int64_t i, int64_t j) const {
        if (i > j) throw std::invalid_argument("DecrementalLis::query: i > j");
        if (i < 0 || j >= live_total) throw std::out_of_range("DecrementalLis::query: range");
        P32 xi = original_at(i);
        P32 xj = original_at(j);
        FamilyRef fr{root ? &root->fam : nullptr};
        return engine->query(fr, xi, xj);
    }
};

DecrementalLis::DecrementalLis(const PointSet& points, double epsilon, AuditOptions audit)
    : impl_(std::make_unique<Impl>(points, epsilon, audit)) {}
DecrementalLis::~DecrementalLis() = default;
DecrementalLis::DecrementalLis(DecrementalLis&&) noexcept = default;
DecrementalLis& DecrementalLis::operator=(DecrementalLis&&) noexcept = default;

int64_t DecrementalLis::live() const { return impl_->live_total; }
double DecrementalLis::epsilon() const { return impl_->eps; }
double DecrementalLis::eps_prime() const { return impl_->epsp; }
int64_t DecrementalLis::exact_threshold() const { return impl_->K0; }

void DecrementalLis::erase(int64_t current_index) {
    if (current_index < 0 || current_index >= impl_->live_total)
        throw std::out_of_range("DecrementalLis::erase: index out of range");
    impl_->erase_by_x(impl_->original_at(current_index));
}

void DecrementalLis::erase_original(Coord x) {
    if (x < 0 || uint32_t(x) >= impl_->n || impl_->dead[size_t(x)])
        throw std::out_of_range("DecrementalLis::erase_original: not live");
    impl_->erase_by_x(P32(x));
}

bool DecrementalLis::live_original(Coord x) const {
    return x >= 0 && uint32_t(x) < impl_->n && !impl_->dead[size_t(x)];
}

int64_t DecrementalLis::position_of_original(Coord x) const {
    if (!live_original(x)) throw std::out_of_range("DecrementalLis: not live");
    return pbst::count_prefix(impl_->root->pts.get(), [&](P32 v) { return v < P32(x); });
}

Coord DecrementalLis::original_at(int64_t position) const {
    return Coord(impl_->original_at(position));
}

int64_t DecrementalLis::query(int64_t i, int64_t j) const {
    if (impl_->live_total == 0) return 0;
    return impl_->raw_query(i, j).score;
}

DecrementalLis::ChainQuery DecrementalLis::query_chain(int64_t i, int64_t j) const {
    ChainQuery out;
    if (impl_->live_total == 0) return out;
    auto qr = impl_->raw_query(i, j);
    out.score = qr.score;
    if (!qr.found) return out;
    for (P32 p : *qr.seg.chain)
        if (!impl_->dead[p]) out.chain.push_back(Point{Coord(p), impl_->ys[p]});
    return out;
}

const StructureStats& DecrementalLis::stats() const {
    auto& st = impl_->st;
    auto& es = impl_->engine->stats();
    st.merges = es.merges;
    st.rejoins = es.rejoins;
    st.level_builds = es.level_builds;
    st.max_merge_output = es.max_out;
    st.max_cover_depth = es.max_cover_depth;
    st.depth_violations = es.depth_violations;
    return st;
}

std::vector<DecrementalLis::DebugRect> DecrementalLis::debug_snapshot() const {
    std::vector<DebugRect> out;
    for (auto& [key, rp] : impl_->rects) {
        const Impl::Rect& rc = *rp;
        if (rc.live == 0) continue;
        DebugRect dr;
        dr.x1 = Coord(rc.ix << rc.kx);
        dr.x2 = Coord(((rc.ix + 1) << rc.kx) - 1);
        dr.y1 = Coord(rc.iy << rc.ky);
        dr.y2 = Coord(((rc.iy + 1) << rc.ky) - 1);
        dr.height = rc.ky;
        dr.live = rc.live;
        for (size_t i = 0; i < rc.fam.spec.size(); ++i) {
            const LevelSpec& s = rc.fam.spec[i];
            DebugLevel dl;
            dl.score = s.score;
            dl.cap = s.cap;
            dl.exact = s.exact;
            dl.merged = rc.fam.lvl[i].merged;
            pbst::for_each(rc.fam.lvl[i].tree.get(), [&](const Seg& sg) {
                Segment pub;
                pub.begin = Coord(sg.begin);
                pub.end = Coord(sg.end);
                for (P32 p : *sg.chain) pub.chain.push_back(Point{Coord(p), impl_->ys[p]});
                dl.segments.push_back(std::move(pub));
            });
            dr.levels.push_back(std::move(dl));
        }
        out.push_back(std::move(dr));
    }
    return out;
}

}  // namespace dynlis
