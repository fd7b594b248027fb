#pragma once

// Persistent order-statistic balanced search tree.
//
// Nodes are immutable once created and shared between versions through
// reference counts; every mutating operation copies the search path and
// returns a new root, so any previously obtained root stays valid. This is
// what lets a cover of a rectangle join the cover trees of its children
// without destroying them.
//
// Balancing is AVL (height-based), which keeps Join/Split at O(log n) and
// gives a deterministic height bound of ~1.44 log2(n).

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <utility>
#include <vector>

namespace dynlis::pbst {

template <class V>
struct Node {
    Node* left;
    Node* right;
    uint32_t size;
    int32_t refs;
    int8_t height;
    V value;
};

template <class V>
inline int height(const Node<V>* t) { return t ? t->height : 0; }

template <class V>
inline uint32_t size(const Node<V>* t) { return t ? t->size : 0; }

// Slab allocator with a free list. Nodes from one pool must only be linked
// with nodes from the same pool.
template <class V>
class Pool {
  public:
    using N = Node<V>;

    Pool() = default;
    Pool(const Pool&) = delete;
    Pool& operator=(const Pool&) = delete;
    ~Pool() {
        for (auto& blk : blocks_) ::operator delete[](blk);
    }

    N* make(N* l, N* r, V v) {
        N* n = alloc();
        n->left = l;
        n->right = r;
        if (l) ++l->refs;
        if (r) ++r->refs;
        n->size = 1 + size(l) + size(r);
        n->height = int8_t(1 + std::max(height(l), height(r)));
        n->refs = 1;
        ::new (static_cast<void*>(std::addressof(n->value))) V(std::move(v));
        return n;
    }

    void retain(N* t) {
        if (t) ++t->refs;
    }

    void release(N* t) {
        while (t && --t->refs == 0) {
            N* l = t->left;
            N* r = t->right;
            t->value.~V();
            t->left = free_;
            free_ = t;
            // Free one child iteratively, recurse on the other.
            if (l) release(l);
            t = r;
        }
    }

    size_t live_nodes() const { return allocated_ - free_count(); }

  private:
    N* alloc() {
        if (!free_) grow();
        N* n = free_;
        free_ = n->left;
        return n;
    }
    void grow() {
        size_t count = blocks_.empty() ? 1024 : (block_sizes_.back() * 2);
        if (count > (1u << 20)) count = 1u << 20;
        N* blk = static_cast<N*>(::operator new[](count * sizeof(N)));
        blocks_.push_back(blk);
        block_sizes_.push_back(count);
        allocated_ += count;
        for (size_t i = count; i-- > 0;) {
            blk[i].left = free_;
            free_ = &blk[i];
        }
    }
    size_t free_count() const {
        size_t c = 0;
        for (N* f = free_; f; f = f->left) ++c;
        return c;
    }

    std::vector<N*> blocks_;
    std::vector<size_t> block_sizes_;
    N* free_ = nullptr;
    size_t allocated_ = 0;
};

// Owning handle for a tree root.
template <class V>
class Ref {
  public:
    Ref() = default;
    Ref(Pool<V>* pool, Node<V>* n) : pool_(pool), n_(n) {}  // adopts (already +1)
    Ref(const Ref& o) : pool_(o.pool_), n_(o.n_) {
        if (pool_) pool_->retain(n_);
    }
    Ref(Ref&& o) noexcept : pool_(o.pool_), n_(o.n_) { o.n_ = nullptr; }
    Ref& operator=(Ref o) noexcept {
        std::swap(pool_, o.pool_);
        std::swap(n_, o.n_);
        return *this;
    }
    ~Ref() {
        if (pool_) pool_->release(n_);
    }

    Node<V>* get() const { return n_; }
    explicit operator bool() const { return n_ != nullptr; }
    uint32_t size() const { return pbst::size(n_); }
    void reset() {
        if (pool_) pool_->release(n_);
        n_ = nullptr;
    }

  private:
    Pool<V>* pool_ = nullptr;
    Node<V>* n_ = nullptr;
};

namespace detail {

// Rebuild a node from children whose heights differ by at most 2.
template <class V>
Node<V>* bal(Pool<V>& pool, Node<V>* l, V v, Node<V>* r) {
    int hl = height(l), hr = height(r);
    if (hl > hr + 1) {
        Node<V>* ll = l->left;
        Node<V>* lr = l->right;
        if (height(ll) >= height(lr)) {
            Node<V>* nr = pool.make(lr, r, std::move(v));
            Node<V>* res = pool.make(ll, nr, l->value);
            pool.release(nr);
            return res;
        }
        Node<V>* nl = pool.make(ll, lr->left, l->value);
        Node<V>* nr = pool.make(lr->right, r, std::move(v));
        Node<V>* res = pool.make(nl, nr, lr->value);
        pool.release(nl);
        pool.release(nr);
        return res;
    }
    if (hr > hl + 1) {
        Node<V>* rl = r->left;
        Node<V>* rr = r->right;
        if (height(rr) >= height(rl)) {
            Node<V>* nl = pool.make(l, rl, std::move(v));
            Node<V>* res = pool.make(nl, rr, r->value);
            pool.release(nl);
            return res;
        }
        Node<V>* nl = pool.make(l, rl->left, std::move(v));
        Node<V>* nr = pool.make(rl->right, rr, r->value);
        Node<V>* res = pool.make(nl, nr, rl->value);
        pool.release(nl);
        pool.release(nr);
        return res;
    }
    return pool.make(l, r, std::move(v));
}

}  // namespace detail

// Join with a middle element; all of l < v < all of r, arbitrary heights.
template <class V>
Node<V>* join_mid(Pool<V>& pool, Node<V>* l, V v, Node<V>* r) {
    if (height(l) > height(r) + 1) {
        Node<V>* sub = join_mid(pool, l->right, std::move(v), r);
        Node<V>* res = detail::bal(pool, l->left, l->value, sub);
        pool.release(sub);
        return res;
    }
    if (height(r) > height(l) + 1) {
        Node<V>* sub = join_mid(pool, l, std::move(v), r->left);
        Node<V>* res = detail::bal(pool, sub, r->value, r->right);
        pool.release(sub);
        return res;
    }
    return pool.make(l, r, std::move(v));
}

// Removes the smallest element; returns new root (+1), writes the element.
template <class V>
Node<V>* remove_min(Pool<V>& pool, Node<V>* t, V& out) {
    assert(t);
    if (!t->left) {
        out = t->value;
        pool.retain(t->right);
        return t->right;
    }
    Node<V>* nl = remove_min(pool, t->left, out);
    Node<V>* res = detail::bal(pool, nl, t->value, t->right);
    pool.release(nl);
    return res;
}

template <class V>
Node<V>* remove_max(Pool<V>& pool, Node<V>* t, V& out) {
    assert(t);
    if (!t->right) {
        out = t->value;
        pool.retain(t->left);
        return t->left;
    }
    Node<V>* nr = remove_max(pool, t->right, out);
    Node<V>* res = detail::bal(pool, t->left, t->value, nr);
    pool.release(nr);
    return res;
}

// Join of two trees, all keys of l smaller than keys of r.
template <class V>
Node<V>* join(Pool<V>& pool, Node<V>* l, Node<V>* r) {
    if (!l) {
        pool.retain(r);
        return r;
    }
    if (!r) {
        pool.retain(l);
        return l;
    }
    V mid;
    Node<V>* nl = remove_max(pool, l, mid);
    Node<V>* res = join_mid(pool, nl, std::move(mid), r);
    pool.release(nl);
    return res;
}

// Insert keeping keys unique under `less`; an equal element is replaced.
template <class V, class Less>
Node<V>* insert(Pool<V>& pool, Node<V>* t, V v, const Less& less) {
    if (!t) return pool.make(nullptr, nullptr, std::move(v));
    if (less(v, t->value)) {
        Node<V>* nl = insert(pool, t->left, std::move(v), less);
        Node<V>* res = detail::bal(pool, nl, t->value, t->right);
        pool.release(nl);
        return res;
    }
    if (less(t->value, v)) {
        Node<V>* nr = insert(pool, t->right, std::move(v), less);
        Node<V>* res = detail::bal(pool, t->left, t->value, nr);
        pool.release(nr);
        return res;
    }
    return pool.make(t->left, t->right, std::move(v));
}

// Erase the element equal to `key` under `less`; absent key is a no-op.
template <class V, class K, class Less>
Node<V>* erase(Pool<V>& pool, Node<V>* t, const K& key, const Less& less) {
    if (!t) return nullptr;
    if (less(key, t->value)) {
        Node<V>* nl = erase(pool, t->left, key, less);
        if (nl == t->left) {
            pool.release(nl);
            pool.retain(t);
            return t;
        }
        Node<V>* res = detail::bal(pool, nl, t->value, t->right);
        pool.release(nl);
        return res;
    }
    if (less(t->value, key)) {
        Node<V>* nr = erase(pool, t->right, key, less);
        if (nr == t->right) {
            pool.release(nr);
            pool.retain(t);
            return t;
        }
        Node<V>* res = detail::bal(pool, t->left, t->value, nr);
        pool.release(nr);
        return res;
    }
    if (!t->left) {
        pool.retain(t->right);
        return t->right;
    }
    if (!t->right) {
        pool.retain(t->left);
        return t->left;
    }
    V succ;
    Node<V>* nr = remove_min(pool, t->right, succ);
    Node<V>* res = detail::bal(pool, t->left, std::move(succ), nr);
    pool.release(nr);
    return res;
}

// Split: left gets every element with pred(v) true. pred must be monotone
// (a prefix of the in-order sequence satisfies it).
template <class V, class Pred>
void split(Pool<V>& pool, Node<V>* t, const Pred& pred, Node<V>** out_l, Node<V>** out_r) {
    if (!t) {
        *out_l = nullptr;
        *out_r = nullptr;
        return;
    }
    if (pred(t->value)) {
        Node<V>*l2, *r2;
        split(pool, t->right, pred, &l2, &r2);
        *out_l = join_mid(pool, t->left, t->value, l2);
        *out_r = r2;
        pool.release(l2);
    } else {
        Node<V>*l2, *r2;
        split(pool, t->left, pred, &l2, &r2);
        *out_l = l2;
        *out_r = join_mid(pool, r2, t->value, t->right);
        pool.release(r2);
    }
}

// Deletes the contiguous in-order run where inRun holds. beforeRun must be
// true exactly on the prefix preceding the run.
template <class V, class Before, class InRun>
Node<V>* erase_run(Pool<V>& pool, Node<V>* t, const Before& beforeRun, const InRun& inRun) {
    Node<V>*l, *rest, *mid, *r;
    split(pool, t, beforeRun, &l, &rest);
    split(
        pool, rest, [&](const V& v) { return beforeRun(v) || inRun(v); }, &mid, &r);
    Node<V>* res = join(pool, l, r);
    pool.release(l);
    pool.release(rest);
    pool.release(mid);
    pool.release(r);
    return res;
}

// Last element (largest) with pred true; pred monotone true -> false.
template <class V, class Pred>
const V* find_last(const Node<V>* t, const Pred& pred) {
    const V* best = nullptr;
    while (t) {
        if (pred(t->value)) {
            best = &t->value;
            t = t->right;
        } else {
            t = t->left;
        }
    }
    return best;
}

// First element (smallest) with pred true; pred monotone false -> true.
template <class V, class Pred>
const V* find_first(const Node<V>* t, const Pred& pred) {
    const V* best = nullptr;
    while (t) {
        if (pred(t->value)) {
            best = &t->value;
            t = t->left;
        } else {
            t = t->right;
        }
    }
    return best;
}

// Number of elements in the prefix where pred holds; pred monotone true -> false.
template <class V, class Pred>
uint32_t count_prefix(const Node<V>* t, const Pred& pred) {
    uint32_t c = 0;
    while (t) {
        if (pred(t->value)) {
            c += size(t->left) + 1;
            t = t->right;
        } else {
            t = t->left;
        }
    }
    return c;
}

// 0-based rank access.
template <class V>
const V* at_rank(const Node<V>* t, uint32_t r) {
    while (t) {
        uint32_t ls = size(t->left);
        if (r < ls) {
            t = t->left;
        } else if (r == ls) {
            return &t->value;
        } else {
            r -= ls + 1;
            t = t->right;
        }
    }
    return nullptr;
}

template <class V, class Fn>
void for_each(const Node<V>* t, const Fn& fn) {
    if (!t) return;
    for_each(t->left, fn);
    fn(t->value);
    for_each(t->right, fn);
}

// In-order visit of the run between two monotone predicates: elements with
// skip(v) true are skipped (a prefix), the visit stops at the first element
// with stop(v) true (a suffix). fn may return false to abort early.
template <class V, class Skip, class Stop, class Fn>
bool for_each_between(const Node<V>* t, const Skip& skip, const Stop& stop, const Fn& fn) {
    if (!t) return true;
    if (skip(t->value)) return for_each_between(t->right, skip, stop, fn);
    if (!for_each_between(t->left, skip, stop, fn)) return false;
    if (stop(t->value)) return false;
    if (!fn(t->value)) return false;
    return for_each_between(t->right, skip, stop, fn);
}

// Perfectly balanced build from an in-order sorted range.
template <class V>
Node<V>* build_sorted(Pool<V>& pool, const V* vals, size_t n) {
    if (n == 0) return nullptr;
    size_t mid = n / 2;
    Node<V>* l = build_sorted(pool, vals, mid);
    Node<V>* r = build_sorted(pool, vals + mid + 1, n - mid - 1);
    Node<V>* res = pool.make(l, r, vals[mid]);
    pool.release(l);
    pool.release(r);
    return res;
}

// Structural checks used by tests.
template <class V>
bool check_invariants(const Node<V>* t) {
    if (!t) return true;
    if (t->size != 1 + size(t->left) + size(t->right)) return false;
    if (t->height != 1 + std::max(height(t->left), height(t->right))) return false;
    if (std::abs(height(t->left) - height(t->right)) > 1) return false;
    return check_invariants(t->left) && check_invariants(t->right);
}

}  // namespace dynlis::pbst
