#pragma once

// (m,m) additive secret sharing over Z_q and Beaver-triple multiplication
// of shared values. Triples come from a trusted dealer and are single-use.

#include <deque>

#include "tracemix/algebra.hpp"

namespace tracemix {

// First m-1 shares uniform, last one x minus their sum.
std::vector<Scalar> share_mm(const Scalar& x, size_t m, Rng& rng);

Scalar recons(std::span<const Scalar> shares);

struct BeaverTriple {
    Scalar a, b, c;  // one party's share of (a, b, ab)
};

// triples[t][k] is party k's share of triple t.
std::vector<std::vector<BeaverTriple>> deal_triples(size_t m, size_t count, Rng& rng);

// Per-party single-use pool; take() consumes, so a triple can never feed
// two multiplications.
class TripleStore {
public:
    void put(const BeaverTriple& t) { q_.push_back(t); }
    BeaverTriple take() {
        if (q_.empty()) throw std::runtime_error("beaver triple pool exhausted");
        BeaverTriple t = q_.front();
        q_.pop_front();
        return t;
    }
    size_t remaining() const { return q_.size(); }

private:
    std::deque<BeaverTriple> q_;
};

// Party-local steps of Beaver multiplication: open (x-a, y-b), then after
// summing the openings finish with z_k = c_k + d*b_k + e*a_k (+ d*e once).
struct MultOpening {
    Scalar d, e;
};

MultOpening mult_open(const Scalar& x_share, const Scalar& y_share, const BeaverTriple& t);

Scalar mult_finish(size_t party_index, const BeaverTriple& t, const Scalar& d, const Scalar& e);

// Whole-protocol helper over all parties at once; consumes the triple.
class ConsumableTriple {
public:
    explicit ConsumableTriple(std::vector<BeaverTriple> shares) : shares_(std::move(shares)) {}
    std::vector<BeaverTriple> take();
    bool used() const { return used_; }

private:
    std::vector<BeaverTriple> shares_;
    bool used_ = false;
};

std::vector<Scalar> mult(std::span<const Scalar> x_shares, std::span<const Scalar> y_shares,
                         ConsumableTriple& triple);

}  // namespace tracemix
