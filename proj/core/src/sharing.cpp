#include "tracemix/sharing.hpp"

namespace tracemix {

std::vector<Scalar> share_mm(const Scalar& x, size_t m, Rng& rng) {
    if (m == 0) throw std::invalid_argument("share_mm: zero parties");
    std::vector<Scalar> shares;
    shares.reserve(m);
    Scalar sum = Scalar::zero();
    for (size_t k = 0; k + 1 < m; ++k) {
        Scalar s = random_scalar(rng);
        sum = sum + s;
        shares.push_back(s);
    }
    shares.push_back(x - sum);
    return shares;
}

Scalar recons(std::span<const Scalar> shares) {
    if (shares.empty()) throw std::invalid_argument("recons: empty share vector");
    Scalar sum = Scalar::zero();
    for (const Scalar& s : shares) sum = sum + s;
    return sum;
}

std::vector<std::vector<BeaverTriple>> deal_triples(size_t m, size_t count, Rng& rng) {
    if (m == 0) throw std::invalid_argument("deal_triples: zero parties");
    std::vector<std::vector<BeaverTriple>> out(count);
    for (size_t t = 0; t < count; ++t) {
        Scalar a = random_scalar(rng);
        Scalar b = random_scalar(rng);
        auto a_sh = share_mm(a, m, rng);
        auto b_sh = share_mm(b, m, rng);
        auto c_sh = share_mm(a * b, m, rng);
        out[t].reserve(m);
        for (size_t k = 0; k < m; ++k) {
            out[t].push_back({a_sh[k], b_sh[k], c_sh[k]});
        }
    }
    return out;
}

MultOpening mult_open(const Scalar& x_share, const Scalar& y_share, const BeaverTriple& t) {
    return {x_share - t.a, y_share - t.b};
}

Scalar mult_finish(size_t party_index, const BeaverTriple& t, const Scalar& d, const Scalar& e) {
    Scalar z = t.c + d * t.b + e * t.a;
    if (party_index == 0) z = z + d * e;
    return z;
}

std::vector<BeaverTriple> ConsumableTriple::take() {
    if (used_) throw std::runtime_error("beaver triple reuse rejected");
    used_ = true;
    return shares_;
}

std::vector<Scalar> mult(std::span<const Scalar> x_shares, std::span<const Scalar> y_shares,
                         ConsumableTriple& triple) {
    std::vector<BeaverTriple> ts = triple.take();
    size_t m = ts.size();
    if (x_shares.size() != m || y_shares.size() != m) {
        throw std::invalid_argument("mult: share vectors must cover all parties");
    }
    // Round 1: every party opens (x-a, y-b).
    Scalar d = Scalar::zero(), e = Scalar::zero();
    for (size_t k = 0; k < m; ++k) {
        MultOpening o = mult_open(x_shares[k], y_shares[k], ts[k]);
        d = d + o.d;
        e = e + o.e;
    }
    // Round 2: local completion.
    std::vector<Scalar> z;
    z.reserve(m);
    for (size_t k = 0; k < m; ++k) z.push_back(mult_finish(k, ts[k], d, e));
    return z;
}

}  // namespace tracemix
