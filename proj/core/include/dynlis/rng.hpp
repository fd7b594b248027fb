#pragma once

// Deterministic RNG used by fuzzing, benchmarks and tests. splitmix64 with
// explicit bounded sampling, so runs are bit-reproducible across platforms
// (standard-library distributions are not).

#include <cstdint>
#include <vector>

namespace dynlis {

class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n)
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }

    int64_t range(int64_t lo, int64_t hi) {  // inclusive
        return lo + int64_t(below(uint64_t(hi - lo + 1)));
    }

    double unit() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }

    std::vector<int64_t> permutation(size_t n) {
        std::vector<int64_t> p(n);
        for (size_t i = 0; i < n; ++i) p[i] = int64_t(i);
        for (size_t i = n; i > 1; --i) {
            size_t j = size_t(below(i));
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

  private:
    uint64_t state_;
};

}  // namespace dynlis
