#pragma once

#include <numeric>

#include "tracemix/sha256.hpp"

namespace tracemix {

// Deterministic hash-counter generator. Every piece of randomness in a
// session flows from one seeded root generator, forked per role, so runs
// are exactly reproducible from the session seed.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        Bytes b;
        append_u64(b, seed);
        key_ = sha256_tagged("tracemix/rng-seed", b);
    }
    explicit Rng(const Digest& key) : key_(key) {}

    Rng fork(const std::string& label) const {
        Bytes b(key_.begin(), key_.end());
        append_framed(b, label);
        return Rng(sha256_tagged("tracemix/rng-fork", b));
    }
    Rng fork(const std::string& label, uint64_t index) const {
        Bytes b(key_.begin(), key_.end());
        append_framed(b, label);
        append_u64(b, index);
        return Rng(sha256_tagged("tracemix/rng-fork", b));
    }

    Digest block() {
        Bytes b(key_.begin(), key_.end());
        append_u64(b, counter_++);
        return sha256(b);
    }

    Bytes bytes(size_t n) {
        Bytes out;
        out.reserve(n);
        while (out.size() < n) {
            Digest d = block();
            size_t take = std::min<size_t>(d.size(), n - out.size());
            out.insert(out.end(), d.begin(), d.begin() + take);
        }
        return out;
    }

    uint64_t u64() {
        Digest d = block();
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | d[i];
        return v;
    }

    // Uniform in [0, bound) by rejection.
    uint64_t u64_below(uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("u64_below: zero bound");
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            uint64_t v = u64();
            if (v < limit) return v % bound;
        }
    }

    bool coin() { return (u64() & 1) != 0; }

    // Fisher-Yates permutation of [0, n).
    std::vector<size_t> permutation(size_t n) {
        std::vector<size_t> p(n);
        std::iota(p.begin(), p.end(), size_t{0});
        for (size_t i = n; i > 1; --i) {
            size_t j = u64_below(i);
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

private:
    Digest key_{};
    uint64_t counter_ = 0;
};

}  // namespace tracemix
