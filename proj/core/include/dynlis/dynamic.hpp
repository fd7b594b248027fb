#pragma once

// Fully dynamic (1+eps)-approximate LIS under arbitrary insertions and
// deletions: order-maintenance handles stand in for real coordinates, a
// two-level range-tree recursion (primary on y, secondary on x) with
// 2-balanced splits and periodic from-scratch rebuilds replaces the fixed
// dyadic grid, and Merge additionally filters segments leaving the
// secondary rectangle's x-interval.

#include <cstdint>
#include <memory>
#include <vector>

#include "dynlis/decremental.hpp"  // StructureStats, AuditOptions
#include "dynlis/types.hpp"

namespace dynlis {

class DynamicLis {
  public:
    explicit DynamicLis(double epsilon, AuditOptions audit = {});
    DynamicLis(const std::vector<int64_t>& initial, double epsilon, AuditOptions audit = {});
    ~DynamicLis();
    DynamicLis(DynamicLis&&) noexcept;
    DynamicLis& operator=(DynamicLis&&) noexcept;

    int64_t live() const;
    double epsilon() const;
    double eps_prime() const;

    // Inserts value so that it becomes the element at `position`.
    void insert(int64_t position, int64_t value);
    void erase(int64_t position);
    int64_t value_at(int64_t position) const;

    // Approximate LIS of the current subarray [i, j]:
    // OPT/(1+eps) <= result <= OPT.
    int64_t query(int64_t i, int64_t j) const;

    struct ChainEntry {
        int64_t position;
        int64_t value;
    };
    struct ChainQuery {
        int64_t score = 0;
        std::vector<ChainEntry> chain;  // live witness, length >= score
    };
    ChainQuery query_chain(int64_t i, int64_t j) const;

    const StructureStats& stats() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace dynlis
