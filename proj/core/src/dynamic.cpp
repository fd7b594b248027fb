#include "dynlis/dynamic.hpp"

#include <cmath>
#include <stdexcept>

#include "dynlis/detail/cover_engine.hpp"
#include "dynlis/order_maintenance.hpp"

namespace dynlis {

namespace {

using detail::Family;
using detail::FamilyRef;
using detail::LevelSpec;
using detail::LevelState;
using detail::P32;
using detail::Seg;
using detail::Window;

struct DynGeom {
    using P = P32;  // x-handle of a point
    const OrderMaintenance* xs = nullptr;
    const OrderMaintenance* ys = nullptr;
    const std::vector<uint32_t>* y_of = nullptr;
    const std::vector<uint8_t>* live = nullptr;
    bool x_less(P a, P b) const { return xs->precedes(a, b); }
    bool y_less(P a, P b) const { return ys->precedes((*y_of)[a], (*y_of)[b]); }
    bool is_live(P a) const { return (*live)[a] != 0; }
};

struct VEntry {
    int64_t value;
    P32 xh;
    uint32_t yh;
};

}  // namespace

struct DynamicLis::Impl {
    using Engine = detail::CoverEngine<DynGeom>;

    double eps;
    AuditOptions audit;
    double epsp = 0.5, lambda = 1.5;
    int64_t K0 = 6;
    int64_t live_total = 0;

    OrderMaintenance xs, ys;
    std::vector<uint32_t> y_of;    // by x-handle
    std::vector<int64_t> val_of;   // by x-handle
    std::vector<uint8_t> live_of;  // by x-handle

    pbst::Pool<P32> pt_pool;
    pbst::Pool<VEntry> vi_pool;
    pbst::Ref<VEntry> vindex;  // live elements by (value asc, x desc): the y-order
    std::unique_ptr<Engine> engine;

    struct PNode;
    struct SNode {
        pbst::Ref<P32> pts;
        Family fam;
        int64_t live = 0, m0 = 0, budget = 0;
        P32 xm = 0;
        bool has_xm = false;
        int sheight = 0;
        Window win;
        SNode *l = nullptr, *r = nullptr;
        PNode* owner = nullptr;
    };
    struct PNode {
        uint32_t ym = 0;  // y-handle; bottom holds y strictly before ym
        bool has_ym = false;
        PNode *b = nullptr, *t = nullptr;
        SNode* sec = nullptr;
        int64_t live = 0, m0 = 0, budget = 0;
        int h = 0;  // primary height at build time
    };
    PNode* proot = nullptr;

    StructureStats st;

    // scratch for version prefix sums
    std::vector<uint64_t> pref_b_, pref_t_;

    Impl(const std::vector<int64_t>& initial, double epsilon, AuditOptions a) : audit(a) {
        if (!(epsilon > 0.0) || epsilon > 1.0)
            throw std::invalid_argument("DynamicLis: epsilon must be in (0, 1]");
        eps = epsilon;
        engine = std::make_unique<Engine>(
            DynGeom{&xs, &ys, &y_of, &live_of},
            Engine::Config{lambda, epsp, K0, audit.disable_sparsification, audit.check_depth});
        std::vector<P32> handles;
        handles.reserve(initial.size());
        P32 xprev = xs.head();
        for (int64_t v : initial) {
            P32 xh = xs.insert_after(xprev);
            xprev = xh;
            grow_tables(xh);
            val_of[xh] = v;
            handles.push_back(xh);
        }
        // y handles in value order, ties broken so that the earlier element
        // is larger.
        for (P32 xh : handles) place_y(xh, val_of[xh]);
        live_total = int64_t(handles.size());
        set_parameters();
        proot = build_primary(handles);
    }

    ~Impl() {
        if (proot) destroy_pnode(proot);
    }

    void grow_tables(P32 xh) {
        if (y_of.size() <= xh) {
            y_of.resize(xh + 1, 0);
            val_of.resize(xh + 1, 0);
            live_of.resize(xh + 1, 0);
        }
    }

    void place_y(P32 xh, int64_t value) {
        auto vless = [&](const VEntry& e, const VEntry& k) {
            if (e.value != k.value) return e.value < k.value;
            return xs.precedes(k.xh, e.xh);  // equal values: earlier element is larger
        };
        VEntry key{value, xh, 0};
        const VEntry* pred = pbst::find_last(vindex.get(), [&](const VEntry& e) { return vless(e, key); });
        uint32_t yh = ys.insert_after(pred ? pred->yh : ys.head());
        key.yh = yh;
        vindex =
            pbst::Ref<VEntry>(&vi_pool, pbst::insert(vi_pool, vindex.get(), key,
                                                     [&](const VEntry& x, const VEntry& y) {
                                                         return vless(x, y);
                                                     }));
        y_of[xh] = yh;
        live_of[xh] = 1;
    }

    void remove_value_entry(P32 xh) {
        auto vless = [&](const VEntry& x, const VEntry& y) {
            if (x.value != y.value) return x.value < y.value;
            return xs.precedes(y.xh, x.xh);
        };
        VEntry key{val_of[xh], xh, 0};
        vindex = pbst::Ref<VEntry>(&vi_pool, pbst::erase(vi_pool, vindex.get(), key, vless));
    }

    void set_parameters() {
        double nn = double(std::max<int64_t>(4, live_total));
        double depth = std::log(nn) / std::log(1.5);
        epsp = eps / (12.0 * depth);
        lambda = 1.0 + epsp;
        K0 = int64_t(std::ceil(3.0 / epsp));
        auto& cfg = engine->config();
        cfg.lambda = lambda;
        cfg.eps_prime = epsp;
        cfg.K0 = K0;
        st.merge_output_bound = int64_t(std::ceil(6.0 / epsp)) + 2;
    }

    // ---- tree construction -------------------------------------------------

    void destroy_snode(SNode* s) {
        if (!s) return;
        destroy_snode(s->l);
        destroy_snode(s->r);
        delete s;
    }
    void destroy_pnode(PNode* p) {
        if (!p) return;
        destroy_pnode(p->b);
        destroy_pnode(p->t);
        destroy_snode(p->sec);
        delete p;
    }

    PNode* build_primary(std::vector<P32> pts) {
        PNode* p = new PNode;
        p->live = p->m0 = int64_t(pts.size());
        p->budget = std::max<int64_t>(1, p->m0 / 4);
        if (pts.size() >= 2) {
            std::vector<P32> by_y = pts;
            std::sort(by_y.begin(), by_y.end(),
                      [&](P32 a, P32 b) { return ys.precedes(y_of[a], y_of[b]); });
            P32 median = by_y[by_y.size() / 2];
            p->ym = y_of[median];
            p->has_ym = true;
            std::vector<P32> bot, top;
            bot.reserve(pts.size() / 2 + 1);
            top.reserve(pts.size() / 2 + 1);
            for (P32 q : pts)
                (ys.precedes(y_of[q], p->ym) ? bot : top).push_back(q);
            p->b = build_primary(std::move(bot));
            p->t = build_primary(std::move(top));
            p->h = 1 + std::max(p->b->h, p->t->h);
        }
        Window all;  // unbounded
        p->sec = build_secondary(std::move(pts), p, all);
        return p;
    }

    SNode* build_secondary(std::vector<P32> pts, PNode* owner, const Window& win) {
        SNode* s = new SNode;
        s->owner = owner;
        s->win = win;
        s->live = s->m0 = int64_t(pts.size());
        s->budget = std::max<int64_t>(1, s->m0 / 4);
        s->pts = pbst::Ref<P32>(&pt_pool, pbst::build_sorted(pt_pool, pts.data(), pts.size()));
        s->fam.pts = s->pts.get();
        s->fam.ver1 = engine->next_version();
        if (pts.size() < 2) {
            s->fam.top_exact = pts.empty() ? 0 : 1;
            return s;
        }
        size_t half = pts.size() / 2;
        s->xm = pts[half];
        s->has_xm = true;
        Window wl = win, wr = win;
        wl.has_hi = true;
        wl.hi = s->xm;
        wr.has_lo = true;
        wr.lo = s->xm;
        wr.lo_strict = false;  // the median itself belongs to the right part
        std::vector<P32> left(pts.begin(), pts.begin() + long(half));
        std::vector<P32> right(pts.begin() + long(half), pts.end());
        s->l = build_secondary(std::move(left), owner, wl);
        s->r = build_secondary(std::move(right), owner, wr);
        s->sheight = 1 + std::max(s->l->sheight, s->r->sheight);

        s->fam.spec = detail::make_schedule(K0, 3 * owner->h, 2 * s->m0 + 1, lambda, epsp, true);
        detail::init_max_exact(s->fam);
        s->fam.lvl.resize(s->fam.spec.size());
        int64_t lis = node_lis(pts);
        std::span<const P32> span(pts);
        for (size_t i = 0; i < s->fam.spec.size(); ++i) {
            s->fam.lvl[i].version = engine->next_version();
            if (s->fam.spec[i].score > lis) continue;
            s->fam.lvl[i].tree = engine->build_level(span, s->fam.spec[i], lis);
        }
        s->fam.top_exact = std::min<int64_t>(lis, K0);
        return s;
    }

    int64_t node_lis(std::span<const P32> pts) const {
        std::vector<P32> tops;
        for (P32 p : pts) {
            size_t lo = 0, hi = tops.size();
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (ys.precedes(y_of[tops[mid]], y_of[p]))
                    lo = mid + 1;
                else
                    hi = mid;
            }
            if (lo == tops.size())
                tops.push_back(p);
            else
                tops[lo] = p;
        }
        return int64_t(tops.size());
    }

    std::vector<P32> collect_live(SNode* s, P32 pending_insert, bool has_pending) {
        std::vector<P32> out;
        out.reserve(size_t(s->live + 1));
        pbst::for_each(s->pts.get(), [&](P32 p) {
            if (live_of[p]) out.push_back(p);
        });
        if (has_pending) {
            auto it = std::lower_bound(out.begin(), out.end(), pending_insert,
                                       [&](P32 a, P32 b) { return xs.precedes(a, b); });
            out.insert(it, pending_insert);
        }
        return out;
    }

    void rebuild_primary(PNode*& slot, P32 pending, bool is_insert) {
        ++st.rebuilds;
        std::vector<P32> pts = collect_live(slot->sec, pending, is_insert);
        bool is_root = (slot == proot);
        destroy_pnode(slot);
        slot = nullptr;
        if (is_root) set_parameters();
        slot = build_primary(std::move(pts));
    }

    void rebuild_secondary(SNode*& slot, P32 pending, bool is_insert) {
        ++st.rebuilds;
        std::vector<P32> pts = collect_live(slot, pending, is_insert);
        PNode* owner = slot->owner;
        Window win = slot->win;
        destroy_snode(slot);
        slot = build_secondary(std::move(pts), owner, win);
    }

    // ---- update driver ------------------------------------------------------

    void apply_update(P32 p, bool is_insert) {
        update_primary(proot, p, is_insert);
    }

    void update_primary(PNode*& node, P32 p, bool is_insert) {
        node->live += is_insert ? 1 : -1;
        if (--node->budget <= 0) {
            rebuild_primary(node, p, is_insert);
            return;
        }
        if (node->has_ym) {
            PNode*& child = ys.precedes(y_of[p], node->ym) ? node->b : node->t;
            update_primary(child, p, is_insert);
        }
        update_secondary(node->sec, p, is_insert);
    }

    void update_secondary(SNode*& node, P32 p, bool is_insert) {
        node->live += is_insert ? 1 : -1;
        if (--node->budget <= 0) {
            rebuild_secondary(node, p, is_insert);
            return;
        }
        if (is_insert) {
            node->pts = pbst::Ref<P32>(
                &pt_pool, pbst::insert(pt_pool, node->pts.get(), p,
                                       [&](P32 a, P32 b) { return xs.precedes(a, b); }));
        } else {
            node->pts = pbst::Ref<P32>(
                &pt_pool, pbst::erase(pt_pool, node->pts.get(), p,
                                      [&](P32 a, P32 b) { return xs.precedes(a, b); }));
        }
        node->fam.pts = node->pts.get();
        node->fam.ver1 = engine->next_version();
        if (!node->has_xm) {  // leaf
            node->fam.top_exact = node->live > 0 ? 1 : 0;
            return;
        }
        SNode*& child = xs.precedes(p, node->xm) ? node->l : node->r;
        update_secondary(child, p, is_insert);
        process_levels(*node, p, is_insert);
    }

    // ---- level maintenance ---------------------------------------------------

    static uint64_t level_version(const Family& f, int64_t score) {
        if (score == 1) return f.ver1;
        int idx = detail::spec_index(f, score);
        if (idx < 0) return 0;
        return f.lvl[size_t(idx)].version;
    }

    // pref[s] = sum of versions of levels with score <= s (exact scores only).
    void version_prefix(const FamilyRef& f, int64_t up_to, std::vector<uint64_t>& pref) {
        pref.assign(size_t(up_to) + 1, 0);
        if (!f.fam) return;
        for (int64_t s = 1; s <= up_to; ++s)
            pref[size_t(s)] = pref[size_t(s) - 1] + level_version(*f.fam, s);
    }

    static uint64_t range_sum(const std::vector<uint64_t>& pref, int64_t lo, int64_t hi) {
        if (hi < lo || hi < 1) return 0;
        lo = std::max<int64_t>(lo, 1);
        if (lo > int64_t(pref.size()) - 1) return 0;
        hi = std::min<int64_t>(hi, int64_t(pref.size()) - 1);
        return pref[size_t(hi)] - pref[size_t(lo) - 1];
    }

    void process_levels(SNode& S, P32 p, bool is_insert) {
        PNode* owner = S.owner;
        PNode* pb = owner->b;
        PNode* pt = owner->t;
        FamilyRef fb{pb ? &pb->sec->fam : nullptr};
        FamilyRef ft{pt ? &pt->sec->fam : nullptr};
        const int64_t topB = detail::top_score(fb);
        const int64_t topT = detail::top_score(ft);

        if (is_insert) {
            const int64_t bound = topB + topT + 1;
            version_prefix(fb, std::min<int64_t>(bound, K0), pref_b_);
            version_prefix(ft, std::min<int64_t>(bound, K0), pref_t_);
            for (size_t i = 0; i < S.fam.spec.size(); ++i) {
                const LevelSpec& sp = S.fam.spec[i];
                LevelState& lv = S.fam.lvl[i];
                if (sp.exact) {
                    const int64_t k = sp.score;
                    if (k > bound) {
                        // No chain of this length can exist yet; an untouched
                        // standalone or merged cover stays valid.
                        continue;
                    }
                    const int64_t blo = std::max<int64_t>(0, k - topT);
                    const int64_t bhi = std::min<int64_t>(k, topB);
                    const uint64_t sum =
                        range_sum(pref_b_, blo, bhi) + range_sum(pref_t_, k - bhi, k - blo);
                    if (lv.merged && lv.g_valid && lv.g_lo == blo && lv.g_hi == bhi &&
                        lv.g_sum == sum)
                        continue;  // the merge would reproduce itself
                    remerge(S, i, fb, ft);
                    lv.g_lo = blo;
                    lv.g_hi = bhi;
                    lv.g_sum = sum;
                    lv.g_valid = true;
                } else {
                    if (++lv.counter >= sp.counter_cap) remerge(S, i, fb, ft);
                }
            }
        } else {
            for (size_t i = 0; i < S.fam.spec.size(); ++i) {
                const LevelSpec& sp = S.fam.spec[i];
                LevelState& lv = S.fam.lvl[i];
                if (lv.merged ? lv.out.empty() : !lv.tree) continue;
                if (!engine->level_hit(lv, p)) continue;
                if (sp.exact) {
                    remerge(S, i, fb, ft);
                    lv.g_valid = false;
                } else if (++lv.counter >= sp.counter_cap) {
                    remerge(S, i, fb, ft);
                }
            }
        }
        refresh_joins(S);
        refresh_top(S);
    }

    void remerge(SNode& S, size_t idx, const FamilyRef& fb, const FamilyRef& ft) {
        const LevelSpec& sp = S.fam.spec[idx];
        LevelState& lv = S.fam.lvl[idx];
        lv.out = engine->merge(fb, ft, S.xm, sp, &S.win);
        if (int64_t(lv.out.size()) > st.merge_output_bound) ++st.out_size_violations;
        lv.merged = true;
        ++lv.out_epoch;
        lv.counter = 0;
    }

    void refresh_joins(SNode& S) {
        for (size_t i = 0; i < S.fam.spec.size(); ++i) {
            LevelState& lv = S.fam.lvl[i];
            if (!lv.merged) continue;
            const int64_t score = S.fam.spec[i].score;
            const LevelState* cl = child_level(S.l, score);
            const LevelState* cr = child_level(S.r, score);
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
                                          1 + int64_t(S.sheight) * st.merge_output_bound);
        }
    }

    static const LevelState* child_level(SNode* child, int64_t score) {
        if (!child || child->live == 0) return nullptr;
        int idx = detail::spec_index(child->fam, score);
        if (idx < 0) return nullptr;
        return &child->fam.lvl[size_t(idx)];
    }

    void refresh_top(SNode& S) {
        int64_t top = S.fam.top_exact;
        const int64_t max_exact = S.fam.max_exact;
        auto nonempty = [&](int64_t score) {
            if (score <= 1) return S.live > 0;
            int idx = detail::spec_index(S.fam, score);
            return idx >= 0 && S.fam.lvl[size_t(idx)].tree;
        };
        while (top >= 2 && !nonempty(top)) --top;
        if (top <= 1) top = S.live > 0 ? 1 : 0;
        while (top >= 1 && top < max_exact && nonempty(top + 1)) ++top;
        S.fam.top_exact = top;
    }

    // ---- public operations ---------------------------------------------------

    P32 handle_at(int64_t pos) const {
        const P32* p = proot ? pbst::at_rank(proot->sec->pts.get(), uint32_t(pos)) : nullptr;
        if (!p) throw std::out_of_range("DynamicLis: position out of range");
        return *p;
    }

    void insert(int64_t pos, int64_t value) {
        if (pos < 0 || pos > live_total) throw std::out_of_range("DynamicLis::insert: position");
        P32 after = pos == 0 ? xs.head() : handle_at(pos - 1);
        P32 xh = xs.insert_after(after);
        grow_tables(xh);
        val_of[xh] = value;
        place_y(xh, value);
        ++live_total;
        update_primary(proot, xh, true);
    }

    void erase(int64_t pos) {
        if (pos < 0 || pos >= live_total) throw std::out_of_range("DynamicLis::erase: position");
        P32 xh = handle_at(pos);
        live_of[xh] = 0;
        remove_value_entry(xh);
        --live_total;
        update_primary(proot, xh, false);
    }

    Engine::QueryOut raw_query(int64_t i, int64_t j) const {
        if (i > j) throw std::invalid_argument("DynamicLis::query: i > j");
        if (i < 0 || j >= live_total) throw std::out_of_range("DynamicLis::query: range");
        P32 xi = handle_at(i);
        P32 xj = handle_at(j);
        FamilyRef fr{proot ? &proot->sec->fam : nullptr};
        return engine->query(fr, xi, xj);
    }
};

DynamicLis::DynamicLis(double epsilon, AuditOptions audit)
    : impl_(std::make_unique<Impl>(std::vector<int64_t>{}, epsilon, audit)) {}
DynamicLis::DynamicLis(const std::vector<int64_t>& initial, double epsilon, AuditOptions audit)
    : impl_(std::make_unique<Impl>(initial, epsilon, audit)) {}
DynamicLis::~DynamicLis() = default;
DynamicLis::DynamicLis(DynamicLis&&) noexcept = default;
DynamicLis& DynamicLis::operator=(DynamicLis&&) noexcept = default;

int64_t DynamicLis::live() const { return impl_->live_total; }
double DynamicLis::epsilon() const { return impl_->eps; }
double DynamicLis::eps_prime() const { return impl_->epsp; }

void DynamicLis::insert(int64_t position, int64_t value) { impl_->insert(position, value); }
void DynamicLis::erase(int64_t position) { impl_->erase(position); }

int64_t DynamicLis::value_at(int64_t position) const {
    return impl_->val_of[impl_->handle_at(position)];
}

int64_t DynamicLis::query(int64_t i, int64_t j) const {
    if (impl_->live_total == 0) return 0;
    return impl_->raw_query(i, j).score;
}

DynamicLis::ChainQuery DynamicLis::query_chain(int64_t i, int64_t j) const {
    ChainQuery out;
    if (impl_->live_total == 0) return out;
    auto qr = impl_->raw_query(i, j);
    out.score = qr.score;
    if (!qr.found) return out;
    for (P32 p : *qr.seg.chain) {
        if (!impl_->live_of[p]) continue;
        int64_t pos = pbst::count_prefix(impl_->proot->sec->pts.get(),
                                         [&](P32 v) { return impl_->xs.precedes(v, p); });
        out.chain.push_back(ChainEntry{pos, impl_->val_of[p]});
    }
    return out;
}

const StructureStats& DynamicLis::stats() const {
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

}  // namespace dynlis
