#include "tracemix/curve.hpp"

namespace tracemix {

Limbs g2_cofactor() {
    Limbs h = Fp::MOD;
    uint64_t carry = limb_ops::add(h, Fp::MOD);  // 2p fits: p < 2^254
    (void)carry;
    limb_ops::sub(h, Fr::MOD);
    return h;
}

template <typename Tag>
CurvePoint<Tag> CurvePoint<Tag>::hash_to_point(const std::string& domain, BytesView msg) {
    for (uint32_t ctr = 0; ctr < 65536; ++ctr) {
        Bytes base;
        append_framed(base, domain);
        append_framed(base, msg);
        append_u32(base, ctr);

        Field fx;
        if constexpr (std::is_same_v<Tag, G1Tag>) {
            Digest d = sha256_tagged("tracemix/htc-x", base);
            fx = Fp::from_bytes_mod(d);
        } else {
            Digest d0 = sha256_tagged("tracemix/htc-x0", base);
            Digest d1 = sha256_tagged("tracemix/htc-x1", base);
            fx = Fp2(Fp::from_bytes_mod(d0), Fp::from_bytes_mod(d1));
        }
        Digest sd = sha256_tagged("tracemix/htc-sign", base);
        bool want_odd = (sd[0] & 1) != 0;

        Field rhs = fx.square() * fx + Tag::coeff_b();
        auto fy = rhs.sqrt();
        if (!fy) continue;
        Field yy = *fy;
        if (y_is_odd(yy) != want_odd) yy = -yy;
        CurvePoint p(fx, yy);
        if constexpr (std::is_same_v<Tag, G2Tag>) {
            p = p.mul_limbs(g2_cofactor());
            if (p.is_infinity()) continue;
        }
        if (!p.in_subgroup()) {
            throw std::logic_error("hash_to_point: point escaped the prime-order subgroup");
        }
        return p;
    }
    throw std::logic_error("hash_to_point: no curve point found");
}

template <>
CurvePoint<G1Tag> CurvePoint<G1Tag>::generator() {
    return CurvePoint(Fp::from_u64(1), Fp::from_u64(2));
}

template <>
CurvePoint<G2Tag> CurvePoint<G2Tag>::generator() {
    static const CurvePoint g = hash_to_point("tracemix/g2-base", {});
    return g;
}

template CurvePoint<G1Tag> CurvePoint<G1Tag>::hash_to_point(const std::string&, BytesView);
template CurvePoint<G2Tag> CurvePoint<G2Tag>::hash_to_point(const std::string&, BytesView);

}  // namespace tracemix
