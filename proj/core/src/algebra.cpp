#include "tracemix/algebra.hpp"

namespace tracemix {

std::optional<GroupElement> GroupElement::from_bytes(BytesView in) {
    if (in.empty()) return std::nullopt;
    uint8_t id = in[0];
    BytesView rest = in.subspan(1);
    switch (id) {
        case 1: {
            auto p = G1::from_bytes(rest);
            if (!p) return std::nullopt;
            return GroupElement(*p);
        }
        case 2: {
            auto p = G2::from_bytes(rest);
            if (!p) return std::nullopt;
            return GroupElement(*p);
        }
        case 3: {
            auto p = Gt::from_bytes(rest);
            if (!p) return std::nullopt;
            return GroupElement(*p);
        }
        default:
            return std::nullopt;
    }
}

Bytes SetupParams::to_bytes() const {
    Bytes out;
    append_framed(out, seed);
    append_u64(out, m);
    append_u64(out, n);
    // q, fixed by the curve.
    for (uint64_t limb : Fr::MOD) append_u64(out, limb);
    f1.to_bytes(out);
    g1.to_bytes(out);
    h1.to_bytes(out);
    f2.to_bytes(out);
    g2.to_bytes(out);
    fT.to_bytes(out);
    return out;
}

SetupParams setup(BytesView seed, size_t m, size_t n) {
    if (m == 0) throw std::invalid_argument("setup: need at least one mix-server");
    if (n == 0) throw std::invalid_argument("setup: need at least one ciphertext slot");

    SetupParams p;
    p.seed.assign(seed.begin(), seed.end());
    p.m = m;
    p.n = n;
    p.f1 = G1::hash_to_point("tracemix/setup/f1", seed);
    p.g1 = G1::hash_to_point("tracemix/setup/g1", seed);
    p.h1 = G1::hash_to_point("tracemix/setup/h1", seed);
    p.f2 = G2::hash_to_point("tracemix/setup/f2", seed);
    p.g2 = G2::hash_to_point("tracemix/setup/g2", seed);
    p.fT = pairing(G1::hash_to_point("tracemix/setup/fT", seed), p.g2);

    p.e_g1_g2 = pairing(p.g1, p.g2);
    p.e_g1_f2_inv = pairing(p.g1, p.f2).inverse();
    p.e_h1_f2_inv = pairing(p.h1, p.f2).inverse();

    if (p.e_g1_g2.is_one() || p.fT.is_one()) {
        throw std::logic_error("setup: degenerate pairing");
    }
    return p;
}

Scalar hash_to_challenge(const std::string& domain_tag, BytesView transcript) {
    Digest d = sha256_tagged("tracemix/challenge/" + domain_tag, transcript);
    return Fr::from_bytes_mod(d);
}

Scalar random_scalar(Rng& rng) { return Fr::from_bytes_wide(rng.bytes(64)); }

Scalar random_nonzero_scalar(Rng& rng) {
    for (;;) {
        Scalar s = random_scalar(rng);
        if (!s.is_zero()) return s;
    }
}

}  // namespace tracemix
