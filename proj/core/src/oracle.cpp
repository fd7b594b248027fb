#include "dynlis/oracle.hpp"

#include <algorithm>
#include <sstream>

#include "dynlis/core.hpp"
#include "dynlis/dynamic.hpp"

namespace dynlis::oracle {

int64_t lis_dp(std::span<const int64_t> values) {
    const size_t n = values.size();
    std::vector<int32_t> best(n, 1);
    int64_t ans = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < i; ++j)
            if (values[j] < values[i] && best[j] + 1 > best[i]) best[i] = best[j] + 1;
        ans = std::max<int64_t>(ans, best[i]);
    }
    return ans;
}

int64_t lis_dp(const PointSet& points) {
    const size_t n = points.size();
    std::vector<int32_t> best(n, 1);
    int64_t ans = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < i; ++j)
            if (points.points[j].x < points.points[i].x && points.points[j].y < points.points[i].y &&
                best[j] + 1 > best[i])
                best[i] = best[j] + 1;
        ans = std::max<int64_t>(ans, best[i]);
    }
    return ans;
}

int64_t lis_ref(std::span<const int64_t> values) {
    std::vector<int64_t> tails;  // tails[k] = smallest tail of a chain of length k+1
    for (int64_t v : values) {
        auto it = std::lower_bound(tails.begin(), tails.end(), v);
        if (it == tails.end())
            tails.push_back(v);
        else
            *it = v;
    }
    return int64_t(tails.size());
}

CoverVerdict validate_cover(const PointSet& points, std::span<const Segment> segments, int64_t k1,
                            int64_t k2) {
    CoverVerdict v;
    auto fail = [&](std::string msg, Coord i = 0, Coord j = 0) {
        v.ok = false;
        v.message = std::move(msg);
        v.bad_i = i;
        v.bad_j = j;
        return v;
    };

    // (c) chains are strict and tight; points deleted since the chain was
    // stored do not count toward the score, which must stay in [k1, k2].
    for (const Segment& s : segments) {
        if (s.chain.empty()) return fail("segment with empty chain", s.begin, s.end);
        if (s.chain.front().x != s.begin || s.chain.back().x != s.end)
            return fail("segment interval not tight", s.begin, s.end);
        if (!is_chain(s.chain)) return fail("stored list is not a chain", s.begin, s.end);
        int64_t live_score = 0;
        for (const Point& p : s.chain) {
            auto it = std::lower_bound(points.points.begin(), points.points.end(), p.x,
                                       [](const Point& q, Coord x) { return q.x < x; });
            if (it != points.points.end() && it->x == p.x) {
                if (it->y != p.y) return fail("chain point disagrees with the live set", s.begin, s.end);
                ++live_score;
            }
        }
        if (live_score < k1 || live_score > k2)
            return fail("live segment score outside [k1, k2]", s.begin, s.end);
    }

    // (b) non-inclusion: with begins sorted, ends must strictly increase.
    std::vector<std::pair<Coord, Coord>> iv;
    iv.reserve(segments.size());
    for (const Segment& s : segments) iv.emplace_back(s.begin, s.end);
    std::sort(iv.begin(), iv.end());
    for (size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].first == iv[i - 1].first || iv[i].second <= iv[i - 1].second)
            return fail("segment interval inside another", iv[i].first, iv[i].second);
    }

    // (a) coverage: every point interval with LIS >= k2 holds a segment.
    const size_t n = points.size();
    std::vector<int32_t> best(n);
    for (size_t i = 0; i < n; ++i) {
        // LIS of (i..j) for all j, quadratic DP restarted per i.
        int64_t lis = 0;
        for (size_t j = i; j < n; ++j) {
            best[j] = 1;
            for (size_t t = i; t < j; ++t)
                if (points.points[t].y < points.points[j].y && best[t] + 1 > best[j])
                    best[j] = best[t] + 1;
            lis = std::max<int64_t>(lis, best[j]);
            if (lis < k2) continue;
            Coord xi = points.points[i].x;
            Coord xj = points.points[j].x;
            // First segment starting at or after xi has the smallest end.
            auto it = std::lower_bound(iv.begin(), iv.end(), std::make_pair(xi, Coord(0)),
                                       [](const auto& a, const auto& b) { return a.first < b.first; });
            if (it == iv.end() || it->second > xj)
                return fail("interval with a k2-chain holds no segment", xi, xj);
        }
    }
    return v;
}

namespace {

struct ReplayFailure {
    size_t op_index;
    std::string message;
};

// Exact LIS of a reference subarray; quadratic for small windows, the
// independent patience reference otherwise.
int64_t ref_opt(const std::vector<int64_t>& arr, int64_t i, int64_t j) {
    std::span<const int64_t> window(arr.data() + i, size_t(j - i + 1));
    if (window.size() <= 128) return lis_dp(window);
    return lis_ref(window);
}

template <class Structure>
bool replay_ops(Structure& s, std::vector<int64_t>& ref, const UpdateScript& script, double eps,
                ReplayFailure* fail, int64_t* queries) {
    for (size_t t = 0; t < script.ops.size(); ++t) {
        const ScriptOp& op = script.ops[t];
        switch (op.kind) {
            case ScriptOp::Kind::Insert:
                if (op.a < 0 || op.a > int64_t(ref.size()))
                    throw ScriptParseError(int(t), "insert position out of range");
                s.insert(op.a, op.b);
                ref.insert(ref.begin() + op.a, op.b);
                break;
            case ScriptOp::Kind::Delete:
                if (op.a < 0 || op.a >= int64_t(ref.size()))
                    throw ScriptParseError(int(t), "delete position out of range");
                s.erase(op.a);
                ref.erase(ref.begin() + op.a);
                break;
            case ScriptOp::Kind::Query:
            case ScriptOp::Kind::QueryChain: {
                if (ref.empty()) break;
                int64_t i = op.a, j = op.b;
                if (i < 0 || j < i || j >= int64_t(ref.size()))
                    throw ScriptParseError(int(t), "query interval out of range");
                ++*queries;
                int64_t opt = ref_opt(ref, i, j);
                int64_t ans = s.query(i, j);
                if (ans > opt) {
                    if (fail) *fail = {t, "answer exceeds OPT"};
                    return false;
                }
                if (double(ans) * (1.0 + eps) < double(opt) - 1e-9) {
                    if (fail) *fail = {t, "answer below OPT/(1+eps)"};
                    return false;
                }
                if (op.kind == ScriptOp::Kind::QueryChain) {
                    auto qc = s.query_chain(i, j);
                    if (int64_t(qc.chain.size()) < qc.score) {
                        if (fail) *fail = {t, "witness shorter than reported score"};
                        return false;
                    }
                    int64_t prev_pos = -1;
                    int64_t prev_val = 0;
                    for (const auto& e : qc.chain) {
                        if (e.position < i || e.position > j || e.position <= prev_pos ||
                            (prev_pos >= 0 && e.value <= prev_val) ||
                            ref[size_t(e.position)] != e.value) {
                            if (fail) *fail = {t, "witness is not a live chain in the interval"};
                            return false;
                        }
                        prev_pos = e.position;
                        prev_val = e.value;
                    }
                }
                break;
            }
        }
    }
    return true;
}

// Run the whole script; false means a checked property failed.
bool replay(const UpdateScript& script, double eps, bool force_dynamic, AuditOptions audit,
            ReplayFailure* fail, int64_t* queries, StructureStats* stats) {
    std::vector<int64_t> ref = script.preload;
    int64_t q = 0;
    bool ok;
    if (!script.has_inserts() && !force_dynamic && !script.preload.empty()) {
        DecrementalLis dec(normalize(script.preload), eps, audit);
        struct Adapter {
            DecrementalLis& d;
            std::vector<int64_t>* values;  // original values by original position
            void insert(int64_t, int64_t) { throw std::logic_error("decremental insert"); }
            void erase(int64_t pos) { d.erase(pos); }
            int64_t query(int64_t i, int64_t j) const { return d.query(i, j); }
            struct QC {
                int64_t score;
                std::vector<DynamicLis::ChainEntry> chain;
            };
            QC query_chain(int64_t i, int64_t j) const {
                auto r = d.query_chain(i, j);
                QC out{r.score, {}};
                for (const Point& p : r.chain)
                    out.chain.push_back({d.position_of_original(p.x), (*values)[size_t(p.x)]});
                return out;
            }
        };
        std::vector<int64_t> originals = script.preload;
        Adapter a{dec, &originals};
        ok = replay_ops(a, ref, script, eps, fail, &q);
        if (stats) *stats = dec.stats();
    } else {
        DynamicLis dyn(script.preload, eps, audit);
        ok = replay_ops(dyn, ref, script, eps, fail, &q);
        if (stats) *stats = dyn.stats();
    }
    if (queries) *queries = q;
    return ok;
}

UpdateScript truncated(const UpdateScript& s, size_t op_count) {
    UpdateScript out;
    out.preload = s.preload;
    out.ops.assign(s.ops.begin(), s.ops.begin() + long(op_count));
    return out;
}

}  // namespace

DifferentialReport differential_run(const UpdateScript& script, double eps, bool force_dynamic,
                                    AuditOptions audit) {
    DifferentialReport rep;
    ReplayFailure fail{0, ""};
    bool ok = replay(script, eps, force_dynamic, audit, &fail, &rep.queries, &rep.stats);
    if (ok) return rep;
    rep.ok = false;
    rep.failing_op = fail.op_index;
    rep.message = fail.message;

    // Shrink: cut to the failing prefix, then drop single ops while the
    // failure (any failure) persists.
    UpdateScript cur = truncated(script, fail.op_index + 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < cur.ops.size(); ++i) {
            UpdateScript cand;
            cand.preload = cur.preload;
            cand.ops = cur.ops;
            cand.ops.erase(cand.ops.begin() + long(i));
            try {
                ReplayFailure f2{0, ""};
                int64_t q2 = 0;
                if (!replay(cand, eps, force_dynamic, audit, &f2, &q2, nullptr)) {
                    cur = truncated(cand, f2.op_index + 1);
                    changed = true;
                    break;
                }
            } catch (const std::exception&) {
                // removal made the script invalid; keep the op
            }
        }
    }
    rep.minimized = std::move(cur);
    return rep;
}

}  // namespace dynlis::oracle
